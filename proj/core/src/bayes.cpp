#include "dbel/bayes.hpp"

#include <algorithm>
#include <set>

#include "dbel/error.hpp"
#include "dbel/limits.hpp"

namespace dbel {

double Cpt::lookup(const World& world) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < parents.size(); ++j)
        if (world.value(parents[j])) idx |= std::size_t{1} << (parents.size() - 1 - j);
    return prob_true.at(idx);
}

const Cpt& BayesNet::cpt_for(int var) const {
    for (const Cpt& cpt : cpts)
        if (cpt.child == var) return cpt;
    throw Error("no CPT for variable '" + vars.name(var) + "'");
}

std::vector<std::string> validate(const BayesNet& bn) {
    std::vector<std::string> problems;
    int n = bn.vars.count();
    std::vector<int> cpt_count(n, 0);
    for (const Cpt& cpt : bn.cpts) {
        if (cpt.child < 0 || cpt.child >= n) {
            problems.push_back("CPT child variable index out of range");
            continue;
        }
        ++cpt_count[cpt.child];
        const std::string& child = bn.vars.name(cpt.child);
        std::set<int> seen;
        for (int p : cpt.parents) {
            if (p < 0 || p >= n) {
                problems.push_back("CPT for '" + child + "' references an undeclared parent");
            } else if (!seen.insert(p).second) {
                problems.push_back("CPT for '" + child + "' lists parent '" + bn.vars.name(p) +
                                   "' twice");
            }
        }
        std::size_t expected = std::size_t{1} << cpt.parents.size();
        if (cpt.prob_true.size() != expected)
            problems.push_back("CPT for '" + child + "' has " +
                               std::to_string(cpt.prob_true.size()) + " rows, expected " +
                               std::to_string(expected));
        for (double p : cpt.prob_true)
            if (!(p >= 0.0 && p <= 1.0)) {
                problems.push_back("CPT for '" + child + "' has a probability outside [0,1]");
                break;
            }
    }
    for (int v = 0; v < n; ++v) {
        if (cpt_count[v] == 0)
            problems.push_back("variable '" + bn.vars.name(v) + "' has no CPT");
        else if (cpt_count[v] > 1)
            problems.push_back("variable '" + bn.vars.name(v) + "' has multiple CPTs");
    }

    // Kahn peel over parent -> child edges; leftovers form cycles.
    std::vector<std::set<int>> parents_of(n);
    for (const Cpt& cpt : bn.cpts) {
        if (cpt.child < 0 || cpt.child >= n) continue;
        for (int p : cpt.parents)
            if (p >= 0 && p < n) parents_of[cpt.child].insert(p);
    }
    std::vector<bool> removed(n, false);
    for (bool progress = true; progress;) {
        progress = false;
        for (int v = 0; v < n; ++v) {
            if (removed[v]) continue;
            bool ready = std::all_of(parents_of[v].begin(), parents_of[v].end(),
                                     [&](int p) { return removed[p]; });
            if (ready) {
                removed[v] = true;
                progress = true;
            }
        }
    }
    std::string cycle;
    for (int v = 0; v < n; ++v)
        if (!removed[v]) cycle += (cycle.empty() ? "" : ", ") + bn.vars.name(v);
    if (!cycle.empty()) problems.push_back("directed cycle among variables: " + cycle);
    return problems;
}

double world_prob(const BayesNet& bn, const World& world) {
    double p = 1.0;
    for (const Cpt& cpt : bn.cpts) {
        double t = cpt.lookup(world);
        p *= world.value(cpt.child) ? t : 1.0 - t;
    }
    return p;
}

double formula_prob(const BayesNet& bn, const ContextFormula& formula) {
    int n = bn.vars.count();
    if (n > limits::kMaxEnumerationVars) throw Error("world enumeration cap exceeded");
    double sum = 0.0;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
        World w(i, n);
        if (formula.holds_in(w)) sum += world_prob(bn, w);
    }
    return sum;
}

namespace {

// vars ascending; vars[0] is the most significant index bit.
struct Factor {
    std::vector<int> vars;
    std::vector<double> table;

    std::size_t size() const { return table.size(); }
    bool mentions(int v) const { return std::find(vars.begin(), vars.end(), v) != vars.end(); }
};

std::size_t project_index(std::size_t full_idx, const std::vector<int>& full_vars,
                          const std::vector<int>& sub_vars) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < sub_vars.size(); ++j) {
        auto it = std::find(full_vars.begin(), full_vars.end(), sub_vars[j]);
        std::size_t pos = static_cast<std::size_t>(it - full_vars.begin());
        std::size_t bit = (full_idx >> (full_vars.size() - 1 - pos)) & 1;
        idx |= bit << (sub_vars.size() - 1 - j);
    }
    return idx;
}

Factor product(const Factor& a, const Factor& b) {
    Factor out;
    out.vars = a.vars;
    for (int v : b.vars)
        if (!a.mentions(v)) out.vars.push_back(v);
    std::sort(out.vars.begin(), out.vars.end());
    out.table.assign(std::size_t{1} << out.vars.size(), 0.0);
    for (std::size_t i = 0; i < out.table.size(); ++i)
        out.table[i] = a.table[project_index(i, out.vars, a.vars)] *
                       b.table[project_index(i, out.vars, b.vars)];
    return out;
}

Factor sum_out(const Factor& f, int var) {
    Factor out;
    for (int v : f.vars)
        if (v != var) out.vars.push_back(v);
    out.table.assign(std::size_t{1} << out.vars.size(), 0.0);
    for (std::size_t i = 0; i < f.table.size(); ++i)
        out.table[project_index(i, f.vars, out.vars)] += f.table[i];
    return out;
}

Factor cpt_factor(const BayesNet& bn, const Cpt& cpt) {
    Factor f;
    f.vars = cpt.parents;
    f.vars.push_back(cpt.child);
    std::sort(f.vars.begin(), f.vars.end());
    f.table.assign(std::size_t{1} << f.vars.size(), 0.0);
    int n = bn.vars.count();
    for (std::size_t i = 0; i < f.table.size(); ++i) {
        // Expand the factor assignment into a full world for lookup.
        World w(0, n);
        for (std::size_t j = 0; j < f.vars.size(); ++j)
            w = w.with(f.vars[j], (i >> (f.vars.size() - 1 - j)) & 1);
        double t = cpt.lookup(w);
        f.table[i] = w.value(cpt.child) ? t : 1.0 - t;
    }
    return f;
}

// Fill cost of eliminating v: neighbor pairs not already sharing a factor.
int fill_cost(const std::vector<Factor>& factors, int v) {
    std::set<int> nbrs;
    for (const Factor& f : factors)
        if (f.mentions(v))
            for (int u : f.vars)
                if (u != v) nbrs.insert(u);
    int cost = 0;
    for (auto a = nbrs.begin(); a != nbrs.end(); ++a)
        for (auto b = std::next(a); b != nbrs.end(); ++b) {
            bool adjacent = false;
            for (const Factor& f : factors)
                if (f.mentions(*a) && f.mentions(*b)) {
                    adjacent = true;
                    break;
                }
            if (!adjacent) ++cost;
        }
    return cost;
}

void eliminate(std::vector<Factor>& factors, int v) {
    Factor merged;
    merged.table = {1.0};
    std::vector<Factor> rest;
    for (Factor& f : factors) {
        if (f.mentions(v))
            merged = product(merged, f);
        else
            rest.push_back(std::move(f));
    }
    rest.push_back(sum_out(merged, v));
    factors = std::move(rest);
}

} // namespace

std::vector<double> marginal(const BayesNet& bn, const std::vector<int>& targets,
                             const std::vector<Literal>& evidence) {
    int n = bn.vars.count();
    if (targets.empty()) throw Error("no target variables");
    std::set<int> target_set;
    for (int t : targets) {
        if (t < 0 || t >= n) throw Error("target variable index out of range");
        if (!target_set.insert(t).second) throw Error("duplicate target variable");
    }

    std::vector<Factor> factors;
    for (const Cpt& cpt : bn.cpts) factors.push_back(cpt_factor(bn, cpt));
    for (const Literal& lit : evidence) {
        if (lit.var < 0 || lit.var >= n) throw Error("evidence variable index out of range");
        Factor f;
        f.vars = {lit.var};
        f.table = lit.positive ? std::vector<double>{0.0, 1.0} : std::vector<double>{1.0, 0.0};
        factors.push_back(std::move(f));
    }

    // Min-fill greedy order, ties by variable index.
    std::vector<int> pending;
    for (int v = 0; v < n; ++v)
        if (!target_set.count(v)) pending.push_back(v);
    while (!pending.empty()) {
        int best = -1, best_cost = 0;
        for (int v : pending) {
            int cost = fill_cost(factors, v);
            if (best < 0 || cost < best_cost) {
                best = v;
                best_cost = cost;
            }
        }
        eliminate(factors, best);
        pending.erase(std::find(pending.begin(), pending.end(), best));
    }

    Factor joint;
    joint.table = {1.0};
    for (const Factor& f : factors) joint = product(joint, f);

    std::vector<double> out(std::size_t{1} << targets.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < joint.vars.size(); ++j) {
            auto it = std::find(targets.begin(), targets.end(), joint.vars[j]);
            std::size_t bit = (i >> (targets.size() - 1 - static_cast<std::size_t>(it - targets.begin()))) & 1;
            idx |= bit << (joint.vars.size() - 1 - j);
        }
        out[i] = joint.table[idx];
    }
    double sum = 0.0;
    for (double p : out) sum += p;
    if (sum == 0.0) throw Error("inconsistent evidence");
    for (double& p : out) p /= sum;
    return out;
}

} // namespace dbel
