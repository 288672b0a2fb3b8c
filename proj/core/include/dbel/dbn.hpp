// Two-slice dynamic Bayesian networks: the transition kernel as a
// dense world-by-world matrix, exact forward filtering, and the
// unrolled network over a bounded horizon.

#pragma once

#include <string>
#include <vector>

#include "dbel/bayes.hpp"
#include "dbel/context.hpp"

namespace dbel {

// Transition slice: one CPT per next-slice variable.  Parent ids below
// n = vars.count() refer to the current slice, ids n + i to the next
// slice's variable i.  Edges among next-slice variables are allowed
// but must stay acyclic; current-slice variables take no CPTs.
struct TwoSliceNet {
    Variables vars;
    std::vector<Cpt> next_cpts; // next_cpts[i] has child n + i
};

struct Dbn {
    BayesNet initial;
    TwoSliceNet transition;
};

std::vector<std::string> validate(const Dbn& dbn);

// Row-stochastic matrix over world indices: p[from * 2^n + to].
struct TransitionMatrix {
    int var_count = 0;
    std::vector<double> p;

    double at(std::uint64_t from, std::uint64_t to) const;
    std::uint64_t world_count() const { return std::uint64_t{1} << var_count; }
};

// Dense kernel P(w_{t+1} | w_t).  Throws Error beyond the matrix cap.
TransitionMatrix transition_matrix(const TwoSliceNet& net);

// Distribution over world indices at slice 1.
std::vector<double> initial_distribution(const BayesNet& bn);

// One exact filtering step: dist_{t+1} = dist_t * P.
std::vector<double> forward_step(const TransitionMatrix& matrix, const std::vector<double>& dist);

// Distribution over worlds at slice t by repeated forward steps.
std::vector<double> slice_marginal(const Dbn& dbn, int t);

// Static network over slices 1..horizon; the slice-s copy of variable
// v is named "<v>_<s>".  Throws Error beyond the unrolled-size cap.
BayesNet unravel(const Dbn& dbn, int horizon);

} // namespace dbel
