#include "dbel/dbn.hpp"

#include <algorithm>

#include "dbel/error.hpp"
#include "dbel/limits.hpp"

namespace dbel {

namespace {

// Joint assignment over both slices: current-slice variables occupy
// the high bits, next-slice variables the low bits.
World joined(const World& from, const World& to) {
    int n = from.var_count();
    return World((from.index() << n) | to.index(), 2 * n);
}

} // namespace

std::vector<std::string> validate(const Dbn& dbn) {
    std::vector<std::string> problems = validate(dbn.initial);
    int n = dbn.initial.vars.count();
    if (dbn.transition.vars.count() != n) {
        problems.push_back("initial and transition networks declare different variable counts");
        return problems;
    }
    for (int v = 0; v < n; ++v)
        if (dbn.initial.vars.name(v) != dbn.transition.vars.name(v)) {
            problems.push_back("initial and transition networks declare different variables");
            return problems;
        }

    std::vector<int> cpt_count(n, 0);
    for (const Cpt& cpt : dbn.transition.next_cpts) {
        if (cpt.child < n || cpt.child >= 2 * n) {
            problems.push_back("transition CPT child must be a next-slice variable");
            continue;
        }
        ++cpt_count[cpt.child - n];
        const std::string& child = dbn.transition.vars.name(cpt.child - n);
        for (int p : cpt.parents)
            if (p < 0 || p >= 2 * n)
                problems.push_back("transition CPT for '" + child +
                                   "' references an out-of-range parent");
        std::size_t expected = std::size_t{1} << cpt.parents.size();
        if (cpt.prob_true.size() != expected)
            problems.push_back("transition CPT for '" + child + "' has " +
                               std::to_string(cpt.prob_true.size()) + " rows, expected " +
                               std::to_string(expected));
        for (double p : cpt.prob_true)
            if (!(p >= 0.0 && p <= 1.0)) {
                problems.push_back("transition CPT for '" + child +
                                   "' has a probability outside [0,1]");
                break;
            }
    }
    for (int v = 0; v < n; ++v) {
        if (cpt_count[v] == 0)
            problems.push_back("next-slice variable '" + dbn.transition.vars.name(v) +
                               "' has no CPT");
        else if (cpt_count[v] > 1)
            problems.push_back("next-slice variable '" + dbn.transition.vars.name(v) +
                               "' has multiple CPTs");
    }

    // Acyclicity among next-slice variables (current-slice parents
    // cannot form cycles: they have no CPTs in the transition).
    std::vector<std::vector<int>> primed_parents(n);
    for (const Cpt& cpt : dbn.transition.next_cpts) {
        if (cpt.child < n || cpt.child >= 2 * n) continue;
        for (int p : cpt.parents)
            if (p >= n && p < 2 * n) primed_parents[cpt.child - n].push_back(p - n);
    }
    std::vector<bool> removed(n, false);
    for (bool progress = true; progress;) {
        progress = false;
        for (int v = 0; v < n; ++v) {
            if (removed[v]) continue;
            bool ready = std::all_of(primed_parents[v].begin(), primed_parents[v].end(),
                                     [&](int p) { return removed[p]; });
            if (ready) {
                removed[v] = true;
                progress = true;
            }
        }
    }
    std::string cycle;
    for (int v = 0; v < n; ++v)
        if (!removed[v]) cycle += (cycle.empty() ? "" : ", ") + dbn.transition.vars.name(v);
    if (!cycle.empty())
        problems.push_back("directed cycle among next-slice variables: " + cycle);
    return problems;
}

double TransitionMatrix::at(std::uint64_t from, std::uint64_t to) const {
    return p.at(from * world_count() + to);
}

TransitionMatrix transition_matrix(const TwoSliceNet& net) {
    int n = net.vars.count();
    if (n > limits::kMaxMatrixVars) throw Error("transition matrix cap exceeded");
    TransitionMatrix m;
    m.var_count = n;
    std::uint64_t count = m.world_count();
    m.p.assign(count * count, 0.0);
    for (std::uint64_t from = 0; from < count; ++from) {
        World wf(from, n);
        for (std::uint64_t to = 0; to < count; ++to) {
            World joint = joined(wf, World(to, n));
            double prob = 1.0;
            for (const Cpt& cpt : net.next_cpts) {
                double t = cpt.lookup(joint);
                prob *= joint.value(cpt.child) ? t : 1.0 - t;
            }
            m.p[from * count + to] = prob;
        }
    }
    return m;
}

std::vector<double> initial_distribution(const BayesNet& bn) {
    int n = bn.vars.count();
    if (n > limits::kMaxEnumerationVars) throw Error("world enumeration cap exceeded");
    std::vector<double> dist(std::size_t{1} << n, 0.0);
    for (std::uint64_t i = 0; i < dist.size(); ++i) dist[i] = world_prob(bn, World(i, n));
    return dist;
}

std::vector<double> forward_step(const TransitionMatrix& matrix, const std::vector<double>& dist) {
    std::uint64_t count = matrix.world_count();
    if (dist.size() != count) throw Error("distribution size does not match the matrix");
    std::vector<double> out(count, 0.0);
    for (std::uint64_t from = 0; from < count; ++from) {
        if (dist[from] == 0.0) continue;
        for (std::uint64_t to = 0; to < count; ++to)
            out[to] += dist[from] * matrix.p[from * count + to];
    }
    return out;
}

std::vector<double> slice_marginal(const Dbn& dbn, int t) {
    if (t < 1) throw Error("time must be at least 1");
    std::vector<double> dist = initial_distribution(dbn.initial);
    if (t == 1) return dist;
    TransitionMatrix m = transition_matrix(dbn.transition);
    for (int i = 1; i < t; ++i) dist = forward_step(m, dist);
    return dist;
}

BayesNet unravel(const Dbn& dbn, int horizon) {
    if (horizon < 1) throw Error("horizon must be at least 1");
    int n = dbn.initial.vars.count();
    if (horizon * n > limits::kMaxUnrolledVars) throw Error("unrolled network cap exceeded");
    BayesNet out;
    for (int s = 1; s <= horizon; ++s)
        for (int v = 0; v < n; ++v)
            out.vars.declare(dbn.initial.vars.name(v) + "_" + std::to_string(s));
    for (const Cpt& cpt : dbn.initial.cpts) out.cpts.push_back(cpt);
    for (int s = 2; s <= horizon; ++s) {
        int prev = (s - 2) * n;
        int cur = (s - 1) * n;
        for (const Cpt& cpt : dbn.transition.next_cpts) {
            Cpt copy = cpt;
            copy.child = cur + (cpt.child - n);
            for (int& p : copy.parents) p = p < n ? prev + p : cur + (p - n);
            out.cpts.push_back(std::move(copy));
        }
    }
    return out;
}

} // namespace dbel
