#include "dbel/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dbel/error.hpp"

namespace dbel {

namespace {

// Solves a x = b by Gaussian elimination with partial pivoting.
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    int k = static_cast<int>(b.size());
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        if (a[col][col] == 0.0) throw Error("singular stationary system");
        for (int r = col + 1; r < k; ++r) {
            double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < k; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(k, 0.0);
    for (int r = k - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < k; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

// pi restricted to the class: pi (M - I) = 0 with the last equation
// replaced by sum-to-one.
std::vector<double> class_stationary(const TransitionMatrix& m,
                                     const std::vector<std::uint64_t>& members) {
    int k = static_cast<int>(members.size());
    std::vector<std::vector<double>> a(k, std::vector<double>(k, 0.0));
    std::vector<double> b(k, 0.0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            a[i][j] = m.at(members[j], members[i]) - (i == j ? 1.0 : 0.0);
    for (int j = 0; j < k; ++j) a[k - 1][j] = 1.0;
    b[k - 1] = 1.0;
    return solve_dense(std::move(a), std::move(b));
}

// gcd of cycle lengths within one strongly connected class, via BFS
// level differences; d = level[u] + 1 - level[v] per edge.
int class_period(const std::vector<std::vector<std::uint64_t>>& adj,
                 const std::vector<int>& component_of,
                 const std::vector<std::uint64_t>& members) {
    for (std::uint64_t w : members) {
        auto& succ = adj[w];
        if (std::find(succ.begin(), succ.end(), w) != succ.end()) return 1;
    }
    std::vector<std::int64_t> level(adj.size(), -1);
    std::vector<std::uint64_t> frontier{members[0]};
    level[members[0]] = 0;
    while (!frontier.empty()) {
        std::vector<std::uint64_t> next;
        for (std::uint64_t u : frontier)
            for (std::uint64_t v : adj[u]) {
                if (component_of[v] != component_of[u]) continue;
                if (level[v] < 0) {
                    level[v] = level[u] + 1;
                    next.push_back(v);
                }
            }
        frontier = std::move(next);
    }
    std::int64_t g = 0;
    for (std::uint64_t u : members)
        for (std::uint64_t v : adj[u]) {
            if (component_of[v] != component_of[u]) continue;
            g = std::gcd(g, level[u] + 1 - level[v]);
        }
    return g == 0 ? 1 : static_cast<int>(g);
}

} // namespace

ChainAnalysis analyze(const TransitionMatrix& matrix) {
    std::uint64_t count = matrix.world_count();
    std::vector<std::vector<std::uint64_t>> adj(count), radj(count);
    for (std::uint64_t u = 0; u < count; ++u)
        for (std::uint64_t v = 0; v < count; ++v)
            if (matrix.p[u * count + v] > 0.0) {
                adj[u].push_back(v);
                radj[v].push_back(u);
            }

    // Kosaraju; the second pass discovers components in a topological
    // order of the condensation, so edges go from lower to higher id.
    std::vector<std::uint64_t> order;
    order.reserve(count);
    std::vector<char> visited(count, 0);
    for (std::uint64_t s = 0; s < count; ++s) {
        if (visited[s]) continue;
        std::vector<std::pair<std::uint64_t, std::size_t>> stack{{s, 0}};
        visited[s] = 1;
        while (!stack.empty()) {
            auto& [node, next_child] = stack.back();
            if (next_child < adj[node].size()) {
                std::uint64_t v = adj[node][next_child++];
                if (!visited[v]) {
                    visited[v] = 1;
                    stack.emplace_back(v, 0);
                }
            } else {
                order.push_back(node);
                stack.pop_back();
            }
        }
    }

    ChainAnalysis out;
    out.component_of.assign(count, -1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (out.component_of[*it] >= 0) continue;
        int id = static_cast<int>(out.components.size());
        std::vector<std::uint64_t> members;
        std::vector<std::uint64_t> stack{*it};
        out.component_of[*it] = id;
        while (!stack.empty()) {
            std::uint64_t u = stack.back();
            stack.pop_back();
            members.push_back(u);
            for (std::uint64_t v : radj[u])
                if (out.component_of[v] < 0) {
                    out.component_of[v] = id;
                    stack.push_back(v);
                }
        }
        std::sort(members.begin(), members.end());
        out.components.push_back(std::move(members));
    }

    int comp_count = static_cast<int>(out.components.size());
    std::vector<bool> has_exit(comp_count, false);
    for (std::uint64_t u = 0; u < count; ++u)
        for (std::uint64_t v : adj[u])
            if (out.component_of[u] != out.component_of[v]) has_exit[out.component_of[u]] = true;
    for (int c = 0; c < comp_count; ++c)
        if (!has_exit[c]) out.recurrent.push_back(c);

    for (int c : out.recurrent) {
        const auto& members = out.components[c];
        std::vector<double> pi = class_stationary(matrix, members);
        std::vector<double> full(count, 0.0);
        for (std::size_t i = 0; i < members.size(); ++i) full[members[i]] = pi[i];
        out.stationary.push_back(std::move(full));
        out.period.push_back(class_period(adj, out.component_of, members));
    }
    out.irreducible = comp_count == 1;
    out.aperiodic = std::all_of(out.period.begin(), out.period.end(),
                                [](int p) { return p == 1; });
    return out;
}

double delta(const TransitionMatrix& matrix, const ContextFormula& formula) {
    ChainAnalysis analysis = analyze(matrix);
    double best = 1.0;
    for (std::size_t k = 0; k < analysis.recurrent.size(); ++k) {
        double mass = 0.0;
        for (std::uint64_t w : analysis.components[analysis.recurrent[k]])
            if (formula.holds_in(World(w, matrix.var_count))) mass += analysis.stationary[k][w];
        best = std::min(best, mass);
    }
    return std::clamp(best, 0.0, 1.0);
}

double delta(const Dbn& dbn, const ContextFormula& formula) {
    return delta(transition_matrix(dbn.transition), formula);
}

bool stationary_check(const TransitionMatrix& matrix, const std::vector<double>& dist,
                      double tol) {
    std::uint64_t count = matrix.world_count();
    if (dist.size() != count) throw Error("distribution size does not match the matrix");
    std::vector<double> next = forward_step(matrix, dist);
    for (std::uint64_t w = 0; w < count; ++w)
        if (std::abs(next[w] - dist[w]) > tol) return false;
    return true;
}

} // namespace dbel
