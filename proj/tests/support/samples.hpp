// Hand-built fixture models shared across test binaries.

#pragma once

#include "dbel/context.hpp"
#include "dbel/el.hpp"
#include "dbel/reasoner.hpp"

namespace testsupport {

// Computer-failure ontology over x (critical situation), y (memory
// fails), z (CPU fails): a component uses a memory and a CPU; in a
// critical situation one failing part breaks the component, otherwise
// both must fail.
dbel::ContextualOntology computer_failure_ontology();

// The query the computer-failure fixture is about.
dbel::Gci component_failure_query();

// Single variable x with P(x) = 0.7, persistence transition
// P(x'|x) = 0.9 / P(x'|!x) = 0.2, and one axiom A <= B active when x.
dbel::KnowledgeBase toy_chain_kb();

// Same shape but x never changes: P(x'|x) = 1, P(x'|!x) = 0.
dbel::KnowledgeBase frozen_chain_kb(double p_x);

} // namespace testsupport
