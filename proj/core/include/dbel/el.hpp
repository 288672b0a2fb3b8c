// EL concept trees, TBox normalization, and completion-based subsumption.
//
// Concepts are immutable trees built from atomic names, top, binary
// conjunction, and existential restriction.  Subsumption entailment is
// decided by normalizing the TBox into the four EL normal forms and
// saturating the completion rules to a least fixpoint.

#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dbel {

class Concept {
public:
    enum class Kind { Atomic, Top, And, Exists };

    static Concept atomic(std::string name);
    static Concept top();
    static Concept conj(Concept lhs, Concept rhs);
    static Concept exists(std::string role, Concept filler);

    Kind kind() const;
    const std::string& name() const;   // Atomic only
    const std::string& role() const;   // Exists only
    Concept lhs() const;               // And only
    Concept rhs() const;               // And only
    Concept filler() const;            // Exists only

    // Structural tree equality.
    bool operator==(const Concept& other) const;

    // Canonical identity: conjunctions flattened and sorted, so
    // A and B has the same key as B and A.
    std::string canonical_key() const;

    // Conjunctions are printed flattened; complex existential fillers
    // are parenthesized.  Output reparses with parse_concept.
    std::string to_string() const;

    // Flattened list of non-conjunction descendants, left to right.
    std::vector<Concept> conjuncts() const;

private:
    struct Node;
    explicit Concept(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct Gci {
    Concept lhs;
    Concept rhs;

    bool operator==(const Gci& other) const { return lhs == other.lhs && rhs == other.rhs; }
    std::string to_string() const;
};

// Interned name table; ids are dense and stable.
class SymbolTable {
public:
    int intern(const std::string& name);
    std::optional<int> find(std::string_view name) const;
    const std::string& name(int id) const;
    int size() const { return static_cast<int>(names_.size()); }

private:
    std::vector<std::string> names_;
    std::map<std::string, int, std::less<>> ids_;
};

enum class AxiomForm {
    AtomSub,   // sub1 [= sup
    ConjSub,   // sub1 and sub2 [= sup
    SubExists, // sub1 [= exists role . filler
    ExistsSub, // exists role . filler [= sup
};

struct NormalizedAxiom {
    AxiomForm form{};
    int sub1 = -1;
    int sub2 = -1;
    int role = -1;
    int filler = -1;
    int sup = -1;

    auto operator<=>(const NormalizedAxiom&) const = default;
};

// Normal-form TBox together with the name tables and the map from
// generated names back to the complex concepts they abbreviate.
class NormalizedTBox {
public:
    static constexpr int kTop = 0; // reserved concept id, rendered "top"

    const std::vector<NormalizedAxiom>& axioms() const { return axioms_; }
    const SymbolTable& concept_names() const { return concepts_; }
    const SymbolTable& role_names() const { return roles_; }
    const std::map<int, Concept>& fresh_definitions() const { return fresh_definitions_; }

    bool is_fresh(int concept_id) const;
    std::vector<Gci> to_gcis() const;

private:
    friend class Normalizer;
    SymbolTable concepts_;
    SymbolTable roles_;
    std::vector<NormalizedAxiom> axioms_;
    std::map<int, Concept> fresh_definitions_;
};

// Incremental normalizer.  Complex subconcepts are abbreviated by
// generated names ("_n<k>"); equal subconcepts (up to conjunction
// order) share one name, and each name is defined in both directions
// so it is interchangeable with the concept it abbreviates.
//
// Input concept names must not start with '_' (reserved for generated
// names); violations throw Error.
class Normalizer {
public:
    Normalizer();

    struct Added {
        // Axioms emitted for this input directly (not name definitions).
        std::vector<std::size_t> skeleton;
        // Generated names this input depends on, transitively; the
        // definition axioms of these names must accompany the skeleton.
        std::vector<int> fresh_closure;
    };

    Added add(const Gci& gci);

    // Declares a name without asserting anything about it.
    int declare(const std::string& concept_name);

    struct QueryHandles {
        int lhs_id = -1; // "_q_lhs"
        int rhs_id = -1; // "_q_rhs"
        Added added;
    };

    // Introduces "_q_lhs" / "_q_rhs" defined as the query's sides.
    // At most one query per normalizer.
    QueryHandles add_query(const Gci& query);

    const NormalizedTBox& tbox() const { return tbox_; }
    NormalizedTBox take() { return std::move(tbox_); }

    // Definition axioms of a generated name (indices into axioms()).
    const std::vector<std::size_t>& definition_axioms(int fresh_id) const;

    // Preloads an already-normalized TBox verbatim.
    static Normalizer from(const NormalizedTBox& tbox);

private:
    int intern_input(const std::string& name);
    int intern_role(const std::string& name);
    int fresh_name();
    int concept_id(const Concept& c); // Atomic or Top only
    int atomize(const Concept& c);
    void define_as(int id, const Concept& c, bool definition);
    std::size_t emit(NormalizedAxiom ax, bool definition);
    void split_rhs(const Concept& lhs, const Concept& rhs);
    void emit_normal(const Concept& lhs, const Concept& rhs);
    std::vector<int> closure(const std::set<int>& touched) const;

    NormalizedTBox tbox_;
    std::map<NormalizedAxiom, std::size_t> axiom_index_;
    std::map<std::string, int> fresh_by_key_;
    std::map<int, std::vector<std::size_t>> def_axioms_of_;
    std::map<int, std::set<int>> deps_of_;
    std::set<int> touched_;
    std::vector<std::size_t>* skeleton_sink_ = nullptr;
    int defining_ = -1;
    int fresh_counter_ = 0;
    bool query_added_ = false;
};

// Standard EL normalization; entailment over the original signature is
// preserved and the output is linear in the input size.
NormalizedTBox normalize(const std::vector<Gci>& tbox);

// Least fixpoint of the EL completion rules.  The result contains
// (A, A) and (A, "top") for every concept name A (generated names
// included) and is transitively closed.  Pairs with "top" on the left
// are omitted.
std::set<std::pair<std::string, std::string>> classify(const NormalizedTBox& tbox);

// True iff every model of the TBox satisfies the query.  Decided by
// normalizing, defining "_q_lhs"/"_q_rhs" for the query sides,
// classifying, and checking the pair.
bool entails(const std::vector<Gci>& tbox, const Gci& query);
bool entails(const NormalizedTBox& tbox, const Gci& query);

} // namespace dbel
