// Long-run analysis of the world chain: strongly connected components
// of the positive-transition graph, recurrent classes, per-class
// stationary distributions, periodicity, and the guaranteed long-run
// lower bound of a context formula.

#pragma once

#include <cstdint>
#include <vector>

#include "dbel/context.hpp"
#include "dbel/dbn.hpp"

namespace dbel {

struct ChainAnalysis {
    // components[c] lists member world indices, ascending; component
    // ids are in a topological order of the condensation (edges go
    // from lower to higher id).
    std::vector<std::vector<std::uint64_t>> components;
    std::vector<int> component_of;      // world index -> component id
    std::vector<int> recurrent;         // recurrent component ids, ascending
    // stationary[k]: full-length distribution of recurrent class
    // recurrent[k]; zero off-class.
    std::vector<std::vector<double>> stationary;
    std::vector<int> period;            // per recurrent class, cycle gcd
    bool irreducible = false;
    bool aperiodic = false;             // every recurrent class has period 1
};

ChainAnalysis analyze(const TransitionMatrix& matrix);

// Guaranteed long-run mass of the formula: the minimum over stationary
// distributions of the formula's probability.  The minimum is attained
// at a recurrent class's stationary vector (the extreme points of the
// stationary polytope), so this is min over recurrent classes of the
// class-stationary mass on satisfying worlds.
double delta(const TransitionMatrix& matrix, const ContextFormula& formula);
double delta(const Dbn& dbn, const ContextFormula& formula);

// True iff dist * P = dist entrywise within tol.
bool stationary_check(const TransitionMatrix& matrix, const std::vector<double>& dist,
                      double tol = 1e-9);

} // namespace dbel
