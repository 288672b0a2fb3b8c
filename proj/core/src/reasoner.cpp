#include "dbel/reasoner.hpp"

#include <algorithm>

#include "dbel/error.hpp"
#include "dbel/limits.hpp"
#include "dbel/markov.hpp"

namespace dbel {

std::vector<std::string> validate(const KnowledgeBase& kb) {
    std::vector<std::string> problems = validate(kb.dbn);
    int n = kb.dbn.initial.vars.count();
    if (kb.ontology.vars.count() != n) {
        problems.push_back("ontology and network declare different variable counts");
        return problems;
    }
    for (int v = 0; v < n; ++v)
        if (kb.ontology.vars.name(v) != kb.dbn.initial.vars.name(v)) {
            problems.push_back("ontology and network declare different variables");
            return problems;
        }
    for (const ContextualAxiom& ax : kb.ontology.axioms)
        for (const Literal& lit : ax.context.literals())
            if (lit.var < 0 || lit.var >= n) {
                problems.push_back("axiom context references an undeclared variable");
                break;
            }
    return problems;
}

bool TimedEvidence::consistent() const {
    for (std::size_t i = 0; i < items.size(); ++i)
        for (std::size_t j = i + 1; j < items.size(); ++j)
            if (items[i].var == items[j].var && items[i].slice == items[j].slice &&
                items[i].value != items[j].value)
                return false;
    return true;
}

int TimedEvidence::max_slice() const {
    int m = 0;
    for (const Item& item : items) m = std::max(m, item.slice);
    return m;
}

ContextFormula context_formula(const KnowledgeBase& kb, const Gci& query) {
    return compile_context_formula(kb.ontology, query);
}

double prob(const KnowledgeBase& kb, const Gci& query) {
    return formula_prob(kb.dbn.initial, context_formula(kb, query));
}

double prob_given(const KnowledgeBase& kb, const Gci& query, const Context& given) {
    ContextFormula phi = context_formula(kb, query);
    int n = kb.dbn.initial.vars.count();
    if (n > limits::kMaxEnumerationVars) throw Error("world enumeration cap exceeded");
    double joint = 0.0, denom = 0.0;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
        World w(i, n);
        if (!given.holds_in(w)) continue;
        double p = world_prob(kb.dbn.initial, w);
        denom += p;
        if (phi.holds_in(w)) joint += p;
    }
    if (denom == 0.0) throw Error("conditioning on zero-probability context");
    return joint / denom;
}

namespace {

double formula_mass(const std::vector<double>& dist, const ContextFormula& phi, int var_count) {
    double sum = 0.0;
    for (std::uint64_t w = 0; w < dist.size(); ++w)
        if (phi.holds_in(World(w, var_count))) sum += dist[w];
    return sum;
}

void zero_where(std::vector<double>& dist, const ContextFormula& phi, int var_count) {
    for (std::uint64_t w = 0; w < dist.size(); ++w)
        if (phi.holds_in(World(w, var_count))) dist[w] = 0.0;
}

} // namespace

double prob_at(const KnowledgeBase& kb, const Gci& query, int t) {
    if (t < 1) throw Error("time must be at least 1");
    ContextFormula phi = context_formula(kb, query);
    std::vector<double> dist = slice_marginal(kb.dbn, t);
    return formula_mass(dist, phi, kb.dbn.initial.vars.count());
}

double prob_within(const KnowledgeBase& kb, const Gci& query, int t) {
    if (t < 1) throw Error("time must be at least 1");
    ContextFormula phi = context_formula(kb, query);
    int n = kb.dbn.initial.vars.count();
    // Survival mass: trajectories that have avoided phi at every slice.
    std::vector<double> survive = initial_distribution(kb.dbn.initial);
    zero_where(survive, phi, n);
    if (t > 1) {
        TransitionMatrix m = transition_matrix(kb.dbn.transition);
        for (int i = 2; i <= t; ++i) {
            survive = forward_step(m, survive);
            zero_where(survive, phi, n);
        }
    }
    double surviving = 0.0;
    for (double p : survive) surviving += p;
    return 1.0 - surviving;
}

double prob_within_oracle(const KnowledgeBase& kb, const Gci& query, int t) {
    if (t < 1) throw Error("time must be at least 1");
    ContextFormula phi = context_formula(kb, query);
    int n = kb.dbn.initial.vars.count();
    BayesNet rolled = unravel(kb.dbn, t);
    int total = rolled.vars.count();
    std::uint64_t slice_mask = (std::uint64_t{1} << n) - 1;
    double sum = 0.0;
    for (std::uint64_t traj = 0; traj < (std::uint64_t{1} << total); ++traj) {
        bool hit = false;
        for (int s = 1; s <= t && !hit; ++s) {
            std::uint64_t idx = (traj >> ((t - s) * n)) & slice_mask;
            hit = phi.holds_in(World(idx, n));
        }
        if (hit) sum += world_prob(rolled, World(traj, total));
    }
    return sum;
}

double prob_at_evidence(const KnowledgeBase& kb, const Gci& query, int t,
                        const TimedEvidence& evidence) {
    if (t < 1) throw Error("time must be at least 1");
    if (!evidence.consistent()) throw Error("inconsistent evidence");
    int n = kb.dbn.initial.vars.count();
    for (const TimedEvidence::Item& item : evidence.items) {
        if (item.var < 0 || item.var >= n) throw Error("evidence variable index out of range");
        if (item.slice < 1) throw Error("evidence slice must be at least 1");
        if (item.slice > t) throw Error("evidence slice beyond the queried time");
    }
    ContextFormula phi = context_formula(kb, query);

    auto mask_slice = [&](std::vector<double>& dist, int slice) {
        for (const TimedEvidence::Item& item : evidence.items) {
            if (item.slice != slice) continue;
            for (std::uint64_t w = 0; w < dist.size(); ++w)
                if (World(w, n).value(item.var) != item.value) dist[w] = 0.0;
        }
    };

    std::vector<double> dist = initial_distribution(kb.dbn.initial);
    mask_slice(dist, 1);
    if (t > 1) {
        TransitionMatrix m = transition_matrix(kb.dbn.transition);
        for (int s = 2; s <= t; ++s) {
            dist = forward_step(m, dist);
            mask_slice(dist, s);
        }
    }
    double denom = 0.0;
    for (double p : dist) denom += p;
    if (denom == 0.0) throw Error("zero-probability evidence");
    return formula_mass(dist, phi, n) / denom;
}

EventualResult prob_eventually(const KnowledgeBase& kb, const Gci& query, int horizon) {
    if (horizon < 1) throw Error("horizon must be at least 1");
    ContextFormula phi = context_formula(kb, query);
    TransitionMatrix m = transition_matrix(kb.dbn.transition);
    EventualResult out;
    out.delta_value = delta(m, phi);
    if (out.delta_value > 0.0) {
        out.kind = EventualKind::CertainOne;
        out.lower_bound = 1.0;
        out.horizon_used = 0;
    } else {
        out.kind = EventualKind::Indeterminate;
        out.lower_bound = prob_within(kb, query, horizon);
        out.horizon_used = horizon;
    }
    return out;
}

} // namespace dbel
