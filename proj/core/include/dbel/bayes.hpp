// Discrete Bayesian networks over Boolean variables: joint and
// formula probabilities, and variable-elimination marginals.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dbel/context.hpp"

namespace dbel {

// P(child = 1 | parents) as a dense table indexed by the parents'
// assignment, MSB-first in parent list order (parents[0] is the most
// significant bit).  Roots have no parents and one entry.
struct Cpt {
    int child = -1;
    std::vector<int> parents;
    std::vector<double> prob_true; // size 2^parents.size()

    double lookup(const World& world) const;
};

struct BayesNet {
    Variables vars;
    std::vector<Cpt> cpts;

    const Cpt& cpt_for(int var) const;
};

// Structural problems: missing or duplicate CPTs, wrong table sizes,
// out-of-range probabilities, directed cycles.  Empty means valid.
std::vector<std::string> validate(const BayesNet& bn);

// Product of CPT entries.
double world_prob(const BayesNet& bn, const World& world);

// Total probability of the worlds satisfying the formula, by
// enumeration.  Throws Error beyond the enumeration cap.
double formula_prob(const BayesNet& bn, const ContextFormula& formula);

// Joint marginal P(targets | evidence) for every assignment of the
// targets, indexed MSB-first in target list order.  Evidence literals
// fix variables; zero-probability evidence throws Error.  Variable
// elimination with a min-fill order.
std::vector<double> marginal(const BayesNet& bn, const std::vector<int>& targets,
                             const std::vector<Literal>& evidence = {});

} // namespace dbel
