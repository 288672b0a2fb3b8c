// Contexts over Boolean variables, worlds, monotone DNF context
// formulas, and context-annotated ontologies.
//
// A world is a total truth assignment to the declared variables; a
// context is a consistent set of literals and denotes the worlds that
// satisfy all of them.  Context formulas are kept in canonical
// monotone-free DNF: disjuncts are contexts, subset-subsumed disjuncts
// are dropped, and disjuncts are sorted, so equal formulas compare and
// print identically.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dbel/el.hpp"

namespace dbel {

// Declaration-ordered Boolean variables.  The first declared variable
// is the most significant bit of a world index.
class Variables {
public:
    int declare(const std::string& name);
    std::optional<int> find(std::string_view name) const;
    const std::string& name(int id) const;
    int count() const { return static_cast<int>(names_.size()); }

private:
    std::vector<std::string> names_;
};

struct Literal {
    int var = -1;
    bool positive = true;

    // Positive literal of a variable orders before the negative one.
    auto operator<=>(const Literal& other) const {
        if (auto c = var <=> other.var; c != 0) return c;
        return (positive ? 0 : 1) <=> (other.positive ? 0 : 1);
    }
    bool operator==(const Literal&) const = default;

    std::string to_string(const Variables& vars) const;
};

class World;

// Consistent literal set, stored sorted.  Construction throws Error on
// complementary literals; duplicates collapse.
class Context {
public:
    Context() = default;
    explicit Context(std::vector<Literal> literals);

    const std::vector<Literal>& literals() const { return literals_; }
    bool empty() const { return literals_.empty(); }

    bool holds_in(const World& world) const;

    // True iff this context's literals are a subset of other's, i.e.
    // every world satisfying other satisfies this.
    bool subsumes(const Context& other) const;

    // Nullopt if the union is inconsistent.
    static std::optional<Context> merge(const Context& a, const Context& b);

    auto operator<=>(const Context&) const = default;

    // "x, !z"; the empty context prints "true".
    std::string to_string(const Variables& vars) const;

private:
    std::vector<Literal> literals_;
};

// Total assignment, packed into 64 bits MSB-first: variable 0 is the
// most significant of the var_count() low bits.
class World {
public:
    World(std::uint64_t bits, int var_count);
    static World from_index(std::uint64_t index, int var_count) { return World(index, var_count); }

    bool value(int var) const;
    std::uint64_t index() const { return bits_; }
    int var_count() const { return var_count_; }

    World with(int var, bool value) const;

    bool operator==(const World&) const = default;

    // "x=1, y=0, z=1" in declaration order.
    std::string to_string(const Variables& vars) const;

private:
    std::uint64_t bits_ = 0;
    int var_count_ = 0;
};

// Canonical monotone DNF over contexts.
class ContextFormula {
public:
    // Empty disjunction: holds nowhere.
    static ContextFormula never();
    // Single empty disjunct: holds everywhere.
    static ContextFormula always();
    static ContextFormula literal(Literal lit);
    static ContextFormula of(Context ctx);

    const std::vector<Context>& disjuncts() const { return disjuncts_; }
    bool is_never() const { return disjuncts_.empty(); }
    bool is_always() const;

    bool holds_in(const World& world) const;

    ContextFormula or_with(const ContextFormula& other) const;
    ContextFormula and_with(const ContextFormula& other) const;

    // Canonical form makes syntactic equality decide equivalence.
    bool operator==(const ContextFormula&) const = default;

    // "(x & y) | (!x & z)"; "false" when never, "true" when a disjunct
    // is empty.
    std::string to_string(const Variables& vars) const;

private:
    static ContextFormula canonicalize(std::vector<Context> disjuncts);
    std::vector<Context> disjuncts_;
};

struct ContextualAxiom {
    Gci gci;
    Context context; // empty context: axiom holds in every world
};

struct ContextualOntology {
    Variables vars;
    std::vector<ContextualAxiom> axioms;
};

// Axioms whose context holds in the world, in declaration order.
std::vector<Gci> active_axioms(const ContextualOntology& ont, const World& world);

// True iff the axioms active in the world entail the query.
bool entails_in_world(const ContextualOntology& ont, const World& world, const Gci& query);

// Least context formula phi with: for every world w, the axioms active
// in w entail the query iff w satisfies phi.  Computed by a labeled
// completion that tracks, per derived subsumption, the formula over
// contexts under which it is derivable.
ContextFormula compile_context_formula(const ContextualOntology& ont, const Gci& query);

// All worlds satisfying the formula, ascending by index.  Throws Error
// beyond the enumeration cap.
std::vector<World> satisfying_worlds(const ContextFormula& formula, int var_count);

bool equivalent(const ContextFormula& a, const ContextFormula& b, int var_count);

} // namespace dbel
