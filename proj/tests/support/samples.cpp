#include "support/samples.hpp"

namespace testsupport {

using namespace dbel;

ContextualOntology computer_failure_ontology() {
    Concept comp = Concept::atomic("Comp");
    Concept mem = Concept::atomic("Mem");
    Concept cpu = Concept::atomic("CPU");
    Concept fail_mem = Concept::atomic("FailMem");
    Concept fail_cpu = Concept::atomic("FailCPU");
    Concept fail_comp = Concept::atomic("FailComp");
    Concept uses_mem = Concept::exists("use", mem);
    Concept uses_cpu = Concept::exists("use", cpu);
    Concept uses_fail_mem = Concept::exists("use", fail_mem);
    Concept uses_fail_cpu = Concept::exists("use", fail_cpu);

    ContextualOntology ont;
    int x = ont.vars.declare("x");
    int y = ont.vars.declare("y");
    int z = ont.vars.declare("z");
    auto when = [](std::vector<Literal> lits) { return Context(std::move(lits)); };
    ont.axioms.push_back({{comp, Concept::conj(uses_mem, uses_cpu)}, when({})});
    ont.axioms.push_back({{uses_fail_mem, fail_comp}, when({{x, true}})});
    ont.axioms.push_back({{uses_fail_cpu, fail_comp}, when({{x, true}})});
    ont.axioms.push_back({{Concept::conj(uses_fail_mem, uses_fail_cpu), fail_comp},
                          when({{x, false}})});
    ont.axioms.push_back({{mem, fail_mem}, when({{y, true}})});
    ont.axioms.push_back({{cpu, fail_cpu}, when({{z, true}})});
    return ont;
}

Gci component_failure_query() {
    return {Concept::atomic("Comp"), Concept::atomic("FailComp")};
}

namespace {

KnowledgeBase single_variable_kb(double p_x, double stay_on, double switch_on) {
    KnowledgeBase kb;
    int x = kb.dbn.initial.vars.declare("x");
    kb.dbn.initial.cpts.push_back({x, {}, {p_x}});
    kb.dbn.transition.vars = kb.dbn.initial.vars;
    kb.dbn.transition.next_cpts.push_back({1, {x}, {switch_on, stay_on}});
    kb.ontology.vars = kb.dbn.initial.vars;
    kb.ontology.axioms.push_back(
        {{Concept::atomic("A"), Concept::atomic("B")}, Context({{x, true}})});
    return kb;
}

} // namespace

KnowledgeBase toy_chain_kb() { return single_variable_kb(0.7, 0.9, 0.2); }

KnowledgeBase frozen_chain_kb(double p_x) { return single_variable_kb(p_x, 1.0, 0.0); }

} // namespace testsupport
