// Query answering over a knowledge base: a DBN over context variables
// plus a context-annotated ontology.  Every query first compiles the
// context formula once, then reduces to probability computations on
// the DBN.  Each filtered computation has a brute-force enumeration
// twin used as a correctness oracle.

#pragma once

#include <vector>

#include "dbel/context.hpp"
#include "dbel/dbn.hpp"
#include "dbel/el.hpp"

namespace dbel {

// The ontology's contexts range over the DBN's variables; the two
// Variables tables must declare identical names in identical order.
struct KnowledgeBase {
    Dbn dbn;
    ContextualOntology ontology;
};

std::vector<std::string> validate(const KnowledgeBase& kb);

// Literals pinned to slices (1-based) of the unrolled network.
struct TimedEvidence {
    struct Item {
        int var = -1;
        int slice = 1;
        bool value = true;
    };
    std::vector<Item> items;

    bool consistent() const;
    int max_slice() const;
};

enum class EventualKind { CertainOne, Indeterminate };

struct EventualResult {
    EventualKind kind = EventualKind::Indeterminate;
    double delta_value = 0.0;
    double lower_bound = 0.0;
    int horizon_used = 0;
};

// Probability that the initial slice's world activates an ontology
// entailing the query.
double prob(const KnowledgeBase& kb, const Gci& query);

// Conditioned on the context holding in the initial slice.  Throws
// Error when the context has probability zero.
double prob_given(const KnowledgeBase& kb, const Gci& query, const Context& given);

// Probability at slice t (t >= 1): formula mass of the slice-t world
// distribution obtained by forward filtering.
double prob_at(const KnowledgeBase& kb, const Gci& query, int t);

// Probability that the query holds at some slice in 1..t.  Masked
// forward filtering: the survival vector is zeroed on satisfying
// worlds each slice; result is 1 minus the surviving mass.
// Nondecreasing in t.
double prob_within(const KnowledgeBase& kb, const Gci& query, int t);

// Same quantity by literal trajectory enumeration on the unrolled
// network.  Subject to the unrolled-size cap.
double prob_within_oracle(const KnowledgeBase& kb, const Gci& query, int t);

// P(query at slice t | evidence), evidence slices <= t.  Forward
// filtering with per-slice evidence masking and final normalization.
// Throws Error on inconsistent or zero-probability evidence.
double prob_at_evidence(const KnowledgeBase& kb, const Gci& query, int t,
                        const TimedEvidence& evidence);

// Long-run verdict.  If the guaranteed stationary mass of the query's
// formula is positive the limit is exactly 1 (CertainOne).  Otherwise
// the limit depends on the initial distribution and no closed form
// exists; the result is Indeterminate carrying prob_within at the
// horizon as a monotone lower bound.
EventualResult prob_eventually(const KnowledgeBase& kb, const Gci& query, int horizon = 32);

// The query's compiled context formula.
ContextFormula context_formula(const KnowledgeBase& kb, const Gci& query);

} // namespace dbel
