// Microbenchmarks for the hot paths: classification, context-formula
// compilation, transition-matrix construction, filtering, and the
// stationary solve.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "dbel/bayes.hpp"
#include "dbel/context.hpp"
#include "dbel/dbn.hpp"
#include "dbel/el.hpp"
#include "dbel/markov.hpp"
#include "dbel/reasoner.hpp"

using namespace dbel;

namespace {

// Deterministic mid-size ontology: chains, conjunctions, and role
// hops over `names` concepts, each axiom gated on one of `vars`
// variables.
ContextualOntology synthetic_ontology(int names, int var_count) {
    ContextualOntology ont;
    for (int v = 0; v < var_count; ++v) ont.vars.declare("v" + std::to_string(v));
    auto concept_name = [](int i) { return Concept::atomic("C" + std::to_string(i)); };
    std::mt19937 rng(42);
    for (int i = 0; i + 1 < names; ++i) {
        Context gate({{int(rng() % var_count), (rng() & 1) == 0}});
        switch (i % 3) {
        case 0:
            ont.axioms.push_back({{concept_name(i), concept_name(i + 1)}, gate});
            break;
        case 1:
            ont.axioms.push_back(
                {{Concept::conj(concept_name(i), concept_name(0)), concept_name(i + 1)}, gate});
            break;
        default:
            ont.axioms.push_back(
                {{concept_name(i), Concept::exists("r", concept_name(i + 1))}, gate});
            ont.axioms.push_back(
                {{Concept::exists("r", concept_name(i + 1)), concept_name(i + 1)}, Context()});
            break;
        }
    }
    return ont;
}

Dbn synthetic_dbn(int var_count) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> prob(0.05, 0.95);
    Variables vars;
    for (int v = 0; v < var_count; ++v) vars.declare("v" + std::to_string(v));
    Dbn dbn;
    dbn.initial.vars = vars;
    for (int v = 0; v < var_count; ++v) {
        Cpt cpt;
        cpt.child = v;
        if (v > 0) cpt.parents.push_back(v - 1);
        cpt.prob_true.resize(std::size_t{1} << cpt.parents.size());
        for (double& p : cpt.prob_true) p = prob(rng);
        dbn.initial.cpts.push_back(std::move(cpt));
    }
    dbn.transition.vars = vars;
    for (int v = 0; v < var_count; ++v) {
        Cpt cpt;
        cpt.child = var_count + v;
        cpt.parents = {v};
        cpt.prob_true = {prob(rng), prob(rng)};
        dbn.transition.next_cpts.push_back(std::move(cpt));
    }
    return dbn;
}

void BM_Classify(benchmark::State& state) {
    ContextualOntology ont = synthetic_ontology(int(state.range(0)), 4);
    std::vector<Gci> gcis;
    for (const ContextualAxiom& ax : ont.axioms) gcis.push_back(ax.gci);
    NormalizedTBox tbox = normalize(gcis);
    for (auto _ : state) benchmark::DoNotOptimize(classify(tbox));
}
BENCHMARK(BM_Classify)->Arg(16)->Arg(64)->Arg(256);

void BM_CompileContextFormula(benchmark::State& state) {
    ContextualOntology ont = synthetic_ontology(int(state.range(0)), 4);
    Gci query{Concept::atomic("C0"), Concept::atomic("C" + std::to_string(state.range(0) - 1))};
    for (auto _ : state) benchmark::DoNotOptimize(compile_context_formula(ont, query));
}
BENCHMARK(BM_CompileContextFormula)->Arg(8)->Arg(16)->Arg(32);

void BM_TransitionMatrix(benchmark::State& state) {
    Dbn dbn = synthetic_dbn(int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(transition_matrix(dbn.transition));
}
BENCHMARK(BM_TransitionMatrix)->Arg(4)->Arg(8)->Arg(10);

void BM_ForwardFiltering(benchmark::State& state) {
    Dbn dbn = synthetic_dbn(8);
    TransitionMatrix m = transition_matrix(dbn.transition);
    std::vector<double> dist = initial_distribution(dbn.initial);
    for (auto _ : state) {
        std::vector<double> d = dist;
        for (int step = 0; step < state.range(0); ++step) d = forward_step(m, d);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_ForwardFiltering)->Arg(8)->Arg(32)->Arg(128);

void BM_StationarySolve(benchmark::State& state) {
    Dbn dbn = synthetic_dbn(int(state.range(0)));
    TransitionMatrix m = transition_matrix(dbn.transition);
    for (auto _ : state) benchmark::DoNotOptimize(analyze(m));
}
BENCHMARK(BM_StationarySolve)->Arg(4)->Arg(6)->Arg(8);

} // namespace

BENCHMARK_MAIN();
