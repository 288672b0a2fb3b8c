#include "support/generators.hpp"

#include <numeric>

namespace testsupport {

using namespace dbel;

int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform_prob(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

namespace {

const std::vector<std::string> kConceptPool = {"A", "B", "C", "D", "E"};
const std::vector<std::string> kRolePool = {"r", "s"};

Variables make_vars(int count) {
    Variables vars;
    for (int i = 0; i < count; ++i) vars.declare("v" + std::to_string(i));
    return vars;
}

std::vector<double> random_table(Rng& rng, std::size_t rows, double margin) {
    std::uniform_real_distribution<double> dist(margin, 1.0 - margin);
    std::vector<double> table(rows);
    for (double& p : table) p = dist(rng);
    return table;
}

} // namespace

Concept random_concept(Rng& rng, const std::vector<std::string>& names,
                       const std::vector<std::string>& roles, int max_depth) {
    int shape = uniform_int(rng, 0, max_depth <= 0 ? 5 : 9);
    if (shape <= 4) return Concept::atomic(names[uniform_int(rng, 0, int(names.size()) - 1)]);
    if (shape == 5) return Concept::top();
    if (shape <= 7)
        return Concept::conj(random_concept(rng, names, roles, max_depth - 1),
                             random_concept(rng, names, roles, max_depth - 1));
    return Concept::exists(roles[uniform_int(rng, 0, int(roles.size()) - 1)],
                           random_concept(rng, names, roles, max_depth - 1));
}

Context random_context(Rng& rng, int var_count) {
    std::vector<Literal> lits;
    for (int v = 0; v < var_count; ++v) {
        int pick = uniform_int(rng, 0, 2);
        if (pick == 0) continue;
        lits.push_back({v, pick == 1});
    }
    return Context(std::move(lits));
}

ContextFormula random_formula(Rng& rng, int var_count, int max_disjuncts) {
    ContextFormula formula = ContextFormula::never();
    int n = uniform_int(rng, 0, max_disjuncts);
    for (int i = 0; i < n; ++i)
        formula = formula.or_with(ContextFormula::of(random_context(rng, var_count)));
    return formula;
}

ContextualOntology random_ontology(Rng& rng, int var_count, int max_axioms, int max_depth) {
    ContextualOntology ont;
    ont.vars = make_vars(var_count);
    int n = uniform_int(rng, 0, max_axioms);
    for (int i = 0; i < n; ++i) {
        Gci gci{random_concept(rng, kConceptPool, kRolePool, max_depth),
                random_concept(rng, kConceptPool, kRolePool, max_depth)};
        ont.axioms.push_back({std::move(gci), random_context(rng, var_count)});
    }
    return ont;
}

BayesNet random_bn(Rng& rng, const Variables& vars) {
    BayesNet bn;
    bn.vars = vars;
    for (int v = 0; v < vars.count(); ++v) {
        Cpt cpt;
        cpt.child = v;
        for (int p = 0; p < v; ++p)
            if (uniform_int(rng, 0, 1) == 0 && cpt.parents.size() < 3) cpt.parents.push_back(p);
        cpt.prob_true = random_table(rng, std::size_t{1} << cpt.parents.size(), 0.0);
        bn.cpts.push_back(std::move(cpt));
    }
    return bn;
}

TwoSliceNet random_tbn(Rng& rng, const Variables& vars, double margin) {
    int n = vars.count();
    TwoSliceNet net;
    net.vars = vars;
    for (int v = 0; v < n; ++v) {
        Cpt cpt;
        cpt.child = n + v;
        for (int p = 0; p < n; ++p)
            if (uniform_int(rng, 0, 1) == 0 && cpt.parents.size() < 3) cpt.parents.push_back(p);
        // Next-slice parents only among earlier children keeps the
        // slice acyclic by construction.
        for (int p = 0; p < v; ++p)
            if (uniform_int(rng, 0, 3) == 0 && cpt.parents.size() < 3)
                cpt.parents.push_back(n + p);
        cpt.prob_true = random_table(rng, std::size_t{1} << cpt.parents.size(), margin);
        net.next_cpts.push_back(std::move(cpt));
    }
    return net;
}

Dbn random_dbn(Rng& rng, int var_count, double margin) {
    Variables vars = make_vars(var_count);
    return Dbn{random_bn(rng, vars), random_tbn(rng, vars, margin)};
}

KnowledgeBase random_kb(Rng& rng, int var_count, int max_axioms) {
    KnowledgeBase kb;
    kb.dbn = random_dbn(rng, var_count);
    kb.ontology = random_ontology(rng, var_count, max_axioms, 2);
    kb.ontology.vars = kb.dbn.initial.vars;
    return kb;
}

Gci random_query(Rng& rng) {
    return Gci{Concept::atomic(kConceptPool[uniform_int(rng, 0, int(kConceptPool.size()) - 1)]),
               Concept::atomic(kConceptPool[uniform_int(rng, 0, int(kConceptPool.size()) - 1)])};
}

TransitionMatrix random_positive_matrix(Rng& rng, int var_count) {
    TransitionMatrix m;
    m.var_count = var_count;
    std::uint64_t count = m.world_count();
    m.p.resize(count * count);
    for (std::uint64_t from = 0; from < count; ++from) {
        double sum = 0.0;
        for (std::uint64_t to = 0; to < count; ++to) {
            double w = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
            m.p[from * count + to] = w;
            sum += w;
        }
        for (std::uint64_t to = 0; to < count; ++to) m.p[from * count + to] /= sum;
    }
    return m;
}

std::vector<double> random_distribution(Rng& rng, std::size_t size) {
    std::vector<double> dist(size);
    double sum = 0.0;
    for (double& p : dist) {
        p = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
        sum += p;
    }
    for (double& p : dist) p /= sum;
    return dist;
}

} // namespace testsupport
