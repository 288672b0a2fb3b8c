#include "dbel/context.hpp"

#include <algorithm>

#include "dbel/error.hpp"
#include "dbel/limits.hpp"

namespace dbel {

int Variables::declare(const std::string& name) {
    if (name.empty()) throw Error("empty variable name");
    if (find(name)) throw Error("duplicate variable '" + name + "'");
    names_.push_back(name);
    return static_cast<int>(names_.size()) - 1;
}

std::optional<int> Variables::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

const std::string& Variables::name(int id) const {
    return names_.at(static_cast<std::size_t>(id));
}

std::string Literal::to_string(const Variables& vars) const {
    return (positive ? "" : "!") + vars.name(var);
}

Context::Context(std::vector<Literal> literals) : literals_(std::move(literals)) {
    std::sort(literals_.begin(), literals_.end());
    literals_.erase(std::unique(literals_.begin(), literals_.end()), literals_.end());
    for (std::size_t i = 0; i + 1 < literals_.size(); ++i)
        if (literals_[i].var == literals_[i + 1].var)
            throw Error("inconsistent context: variable occurs both positively and negatively");
}

bool Context::holds_in(const World& world) const {
    for (const Literal& lit : literals_)
        if (world.value(lit.var) != lit.positive) return false;
    return true;
}

bool Context::subsumes(const Context& other) const {
    return std::includes(other.literals_.begin(), other.literals_.end(),
                         literals_.begin(), literals_.end());
}

std::optional<Context> Context::merge(const Context& a, const Context& b) {
    std::vector<Literal> lits;
    lits.reserve(a.literals_.size() + b.literals_.size());
    std::merge(a.literals_.begin(), a.literals_.end(), b.literals_.begin(), b.literals_.end(),
               std::back_inserter(lits));
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 0; i + 1 < lits.size(); ++i)
        if (lits[i].var == lits[i + 1].var) return std::nullopt;
    Context out;
    out.literals_ = std::move(lits);
    return out;
}

std::string Context::to_string(const Variables& vars) const {
    if (literals_.empty()) return "true";
    std::string out;
    for (const Literal& lit : literals_) {
        if (!out.empty()) out += ", ";
        out += lit.to_string(vars);
    }
    return out;
}

World::World(std::uint64_t bits, int var_count) : bits_(bits), var_count_(var_count) {
    if (var_count < 0 || var_count > 63) throw Error("world variable count out of range");
    if (var_count < 64 && bits >= (std::uint64_t{1} << var_count))
        throw Error("world bits exceed the declared variable count");
}

bool World::value(int var) const {
    if (var < 0 || var >= var_count_) throw Error("variable index out of range");
    return (bits_ >> (var_count_ - 1 - var)) & 1;
}

World World::with(int var, bool value) const {
    if (var < 0 || var >= var_count_) throw Error("variable index out of range");
    std::uint64_t mask = std::uint64_t{1} << (var_count_ - 1 - var);
    return World(value ? (bits_ | mask) : (bits_ & ~mask), var_count_);
}

std::string World::to_string(const Variables& vars) const {
    std::string out;
    for (int v = 0; v < var_count_; ++v) {
        if (!out.empty()) out += ", ";
        out += vars.name(v) + "=" + (value(v) ? "1" : "0");
    }
    return out;
}

ContextFormula ContextFormula::never() { return ContextFormula(); }

ContextFormula ContextFormula::always() { return of(Context()); }

ContextFormula ContextFormula::literal(Literal lit) { return of(Context({lit})); }

ContextFormula ContextFormula::of(Context ctx) {
    ContextFormula f;
    f.disjuncts_.push_back(std::move(ctx));
    return f;
}

bool ContextFormula::is_always() const {
    return disjuncts_.size() == 1 && disjuncts_[0].empty();
}

bool ContextFormula::holds_in(const World& world) const {
    for (const Context& d : disjuncts_)
        if (d.holds_in(world)) return true;
    return false;
}

ContextFormula ContextFormula::canonicalize(std::vector<Context> disjuncts) {
    std::sort(disjuncts.begin(), disjuncts.end());
    disjuncts.erase(std::unique(disjuncts.begin(), disjuncts.end()), disjuncts.end());
    ContextFormula f;
    for (const Context& d : disjuncts) {
        bool redundant = false;
        for (const Context& other : disjuncts)
            if (!(other == d) && other.subsumes(d)) {
                redundant = true;
                break;
            }
        if (!redundant) f.disjuncts_.push_back(d);
    }
    return f;
}

ContextFormula ContextFormula::or_with(const ContextFormula& other) const {
    std::vector<Context> ds = disjuncts_;
    ds.insert(ds.end(), other.disjuncts_.begin(), other.disjuncts_.end());
    return canonicalize(std::move(ds));
}

ContextFormula ContextFormula::and_with(const ContextFormula& other) const {
    std::vector<Context> ds;
    for (const Context& a : disjuncts_)
        for (const Context& b : other.disjuncts_)
            if (auto merged = Context::merge(a, b)) ds.push_back(std::move(*merged));
    return canonicalize(std::move(ds));
}

std::string ContextFormula::to_string(const Variables& vars) const {
    if (disjuncts_.empty()) return "false";
    std::string out;
    for (const Context& d : disjuncts_) {
        if (!out.empty()) out += " | ";
        if (d.empty()) {
            out += "true";
        } else if (d.literals().size() == 1) {
            out += d.literals()[0].to_string(vars);
        } else {
            std::string inner;
            for (const Literal& lit : d.literals()) {
                if (!inner.empty()) inner += " & ";
                inner += lit.to_string(vars);
            }
            out += "(" + inner + ")";
        }
    }
    return out;
}

std::vector<Gci> active_axioms(const ContextualOntology& ont, const World& world) {
    std::vector<Gci> out;
    for (const ContextualAxiom& ax : ont.axioms)
        if (ax.context.holds_in(world)) out.push_back(ax.gci);
    return out;
}

bool entails_in_world(const ContextualOntology& ont, const World& world, const Gci& query) {
    return entails(active_axioms(ont, world), query);
}

std::vector<World> satisfying_worlds(const ContextFormula& formula, int var_count) {
    if (var_count > limits::kMaxEnumerationVars)
        throw Error("world enumeration cap exceeded");
    std::vector<World> out;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << var_count); ++i) {
        World w(i, var_count);
        if (formula.holds_in(w)) out.push_back(w);
    }
    return out;
}

bool equivalent(const ContextFormula& a, const ContextFormula& b, int var_count) {
    if (var_count > limits::kMaxEnumerationVars)
        throw Error("world enumeration cap exceeded");
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << var_count); ++i) {
        World w(i, var_count);
        if (a.holds_in(w) != b.holds_in(w)) return false;
    }
    return true;
}

namespace {

// Merges contrib into slot only if it enlarges the satisfying world
// set: subsumed disjuncts vanish in or_with, and a syntactic change is
// double-checked by enumeration when the variable count permits.
bool merge_label(ContextFormula& slot, const ContextFormula& contrib, int var_count) {
    if (contrib.is_never()) return false;
    ContextFormula merged = slot.or_with(contrib);
    if (merged == slot) return false;
    if (var_count <= limits::kMaxEnumerationVars && equivalent(merged, slot, var_count))
        return false;
    slot = std::move(merged);
    return true;
}

// Labeled completion: every derived subsumption and role edge carries
// the formula over worlds under which it is derivable.  Rule firing
// disjoins (premise labels AND axiom label) into the conclusion.
struct LabeledCompletion {
    int n;
    int var_count;
    std::vector<std::vector<ContextFormula>> sub;                 // sub[a][b]: b in S(a)
    std::vector<std::vector<std::vector<ContextFormula>>> edge;   // edge[r][a][b]

    LabeledCompletion(const NormalizedTBox& tbox, const std::vector<ContextFormula>& axiom_labels,
                      int vc)
        : n(tbox.concept_names().size()), var_count(vc) {
        sub.assign(n, std::vector<ContextFormula>(n, ContextFormula::never()));
        edge.assign(tbox.role_names().size(),
                    std::vector<std::vector<ContextFormula>>(
                        n, std::vector<ContextFormula>(n, ContextFormula::never())));
        for (int a = 0; a < n; ++a) {
            sub[a][a] = ContextFormula::always();
            sub[a][NormalizedTBox::kTop] = ContextFormula::always();
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (int a = 0; a < n; ++a) {
                for (std::size_t i = 0; i < tbox.axioms().size(); ++i) {
                    const NormalizedAxiom& ax = tbox.axioms()[i];
                    const ContextFormula& al = axiom_labels[i];
                    if (al.is_never()) continue;
                    switch (ax.form) {
                    case AxiomForm::AtomSub:
                        if (sub[a][ax.sub1].is_never()) break;
                        changed |= merge_label(sub[a][ax.sup], sub[a][ax.sub1].and_with(al),
                                               var_count);
                        break;
                    case AxiomForm::ConjSub:
                        if (sub[a][ax.sub1].is_never() || sub[a][ax.sub2].is_never()) break;
                        changed |= merge_label(
                            sub[a][ax.sup],
                            sub[a][ax.sub1].and_with(sub[a][ax.sub2]).and_with(al), var_count);
                        break;
                    case AxiomForm::SubExists:
                        if (sub[a][ax.sub1].is_never()) break;
                        changed |= merge_label(edge[ax.role][a][ax.filler],
                                               sub[a][ax.sub1].and_with(al), var_count);
                        break;
                    case AxiomForm::ExistsSub:
                        for (int b = 0; b < n; ++b) {
                            if (edge[ax.role][a][b].is_never() || sub[b][ax.filler].is_never())
                                continue;
                            changed |= merge_label(
                                sub[a][ax.sup],
                                edge[ax.role][a][b].and_with(sub[b][ax.filler]).and_with(al),
                                var_count);
                        }
                        break;
                    }
                }
            }
        }
    }
};

} // namespace

ContextFormula compile_context_formula(const ContextualOntology& ont, const Gci& query) {
    Normalizer nz;
    std::vector<ContextFormula> labels;
    auto label_of = [&](std::size_t index) -> ContextFormula& {
        if (index >= labels.size()) labels.resize(index + 1, ContextFormula::never());
        return labels[index];
    };
    auto apply = [&](const Normalizer::Added& added, const ContextFormula& phi) {
        for (std::size_t idx : added.skeleton) {
            ContextFormula& slot = label_of(idx);
            slot = slot.or_with(phi);
        }
        for (int fresh : added.fresh_closure)
            for (std::size_t idx : nz.definition_axioms(fresh)) {
                ContextFormula& slot = label_of(idx);
                slot = slot.or_with(phi);
            }
    };
    for (const ContextualAxiom& ax : ont.axioms)
        apply(nz.add(ax.gci), ContextFormula::of(ax.context));
    auto qh = nz.add_query(query);
    apply(qh.added, ContextFormula::always());

    const NormalizedTBox& tbox = nz.tbox();
    labels.resize(tbox.axioms().size(), ContextFormula::never());
    LabeledCompletion comp(tbox, labels, ont.vars.count());
    return comp.sub[qh.lhs_id][qh.rhs_id];
}

} // namespace dbel
