#include "dbel/el.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

#include "dbel/error.hpp"

namespace dbel {

struct Concept::Node {
    Kind kind;
    std::string text; // Atomic: name; Exists: role
    std::shared_ptr<const Node> a; // And: lhs; Exists: filler
    std::shared_ptr<const Node> b; // And: rhs
};

Concept Concept::atomic(std::string name) {
    if (name.empty()) throw Error("empty concept name");
    return Concept(std::make_shared<const Node>(Node{Kind::Atomic, std::move(name), nullptr, nullptr}));
}

Concept Concept::top() {
    static const auto node = std::make_shared<const Node>(Node{Kind::Top, "", nullptr, nullptr});
    return Concept(node);
}

Concept Concept::conj(Concept lhs, Concept rhs) {
    return Concept(std::make_shared<const Node>(
        Node{Kind::And, "", std::move(lhs.node_), std::move(rhs.node_)}));
}

Concept Concept::exists(std::string role, Concept filler) {
    if (role.empty()) throw Error("empty role name");
    return Concept(std::make_shared<const Node>(
        Node{Kind::Exists, std::move(role), std::move(filler.node_), nullptr}));
}

Concept::Kind Concept::kind() const { return node_->kind; }

const std::string& Concept::name() const {
    assert(node_->kind == Kind::Atomic);
    return node_->text;
}

const std::string& Concept::role() const {
    assert(node_->kind == Kind::Exists);
    return node_->text;
}

Concept Concept::lhs() const {
    assert(node_->kind == Kind::And);
    return Concept(node_->a);
}

Concept Concept::rhs() const {
    assert(node_->kind == Kind::And);
    return Concept(node_->b);
}

Concept Concept::filler() const {
    assert(node_->kind == Kind::Exists);
    return Concept(node_->a);
}

bool Concept::operator==(const Concept& other) const {
    if (node_ == other.node_) return true;
    if (node_->kind != other.node_->kind) return false;
    switch (node_->kind) {
    case Kind::Atomic: return node_->text == other.node_->text;
    case Kind::Top: return true;
    case Kind::And: return lhs() == other.lhs() && rhs() == other.rhs();
    case Kind::Exists: return node_->text == other.node_->text && filler() == other.filler();
    }
    return false;
}

std::vector<Concept> Concept::conjuncts() const {
    std::vector<Concept> out;
    std::deque<Concept> pending{*this};
    while (!pending.empty()) {
        Concept c = pending.front();
        pending.pop_front();
        if (c.kind() == Kind::And) {
            pending.push_front(c.rhs());
            pending.push_front(c.lhs());
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::string Concept::canonical_key() const {
    switch (kind()) {
    case Kind::Atomic: return "a:" + node_->text;
    case Kind::Top: return "T";
    case Kind::Exists: return "e:" + node_->text + "(" + filler().canonical_key() + ")";
    case Kind::And: {
        std::vector<std::string> keys;
        for (const Concept& c : conjuncts()) keys.push_back(c.canonical_key());
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        if (keys.size() == 1) return keys.front();
        std::string out = "&(";
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (i) out += ",";
            out += keys[i];
        }
        return out + ")";
    }
    }
    return {};
}

std::string Concept::to_string() const {
    switch (kind()) {
    case Kind::Atomic: return node_->text;
    case Kind::Top: return "top";
    case Kind::Exists: {
        const Concept& f = filler();
        bool atom = f.kind() == Kind::Atomic || f.kind() == Kind::Top;
        return "exists " + node_->text + " . " + (atom ? f.to_string() : "(" + f.to_string() + ")");
    }
    case Kind::And: {
        std::string out;
        for (const Concept& c : conjuncts()) {
            if (!out.empty()) out += " and ";
            out += c.to_string();
        }
        return out;
    }
    }
    return {};
}

std::string Gci::to_string() const {
    return lhs.to_string() + " <= " + rhs.to_string();
}

int SymbolTable::intern(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    ids_.emplace(name, id);
    return id;
}

std::optional<int> SymbolTable::find(std::string_view name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

const std::string& SymbolTable::name(int id) const {
    return names_.at(static_cast<std::size_t>(id));
}

bool NormalizedTBox::is_fresh(int concept_id) const {
    const std::string& n = concepts_.name(concept_id);
    return !n.empty() && n[0] == '_';
}

std::vector<Gci> NormalizedTBox::to_gcis() const {
    std::vector<Gci> out;
    auto cname = [&](int id) {
        return id == kTop ? Concept::top() : Concept::atomic(concepts_.name(id));
    };
    for (const NormalizedAxiom& ax : axioms_) {
        switch (ax.form) {
        case AxiomForm::AtomSub:
            out.push_back({cname(ax.sub1), cname(ax.sup)});
            break;
        case AxiomForm::ConjSub:
            out.push_back({Concept::conj(cname(ax.sub1), cname(ax.sub2)), cname(ax.sup)});
            break;
        case AxiomForm::SubExists:
            out.push_back({cname(ax.sub1), Concept::exists(roles_.name(ax.role), cname(ax.filler))});
            break;
        case AxiomForm::ExistsSub:
            out.push_back({Concept::exists(roles_.name(ax.role), cname(ax.filler)), cname(ax.sup)});
            break;
        }
    }
    return out;
}

Normalizer::Normalizer() {
    int top = tbox_.concepts_.intern("top");
    assert(top == NormalizedTBox::kTop);
    (void)top;
}

Normalizer Normalizer::from(const NormalizedTBox& tbox) {
    Normalizer nz;
    nz.tbox_ = tbox;
    for (std::size_t i = 0; i < tbox.axioms().size(); ++i)
        nz.axiom_index_.emplace(tbox.axioms()[i], i);
    for (const auto& [id, c] : tbox.fresh_definitions()) {
        const std::string& n = tbox.concept_names().name(id);
        if (n.rfind("_n", 0) == 0)
            nz.fresh_counter_ = std::max(nz.fresh_counter_, std::stoi(n.substr(2)) + 1);
        if (n == "_q_lhs" || n == "_q_rhs")
            nz.query_added_ = true;
        else
            nz.fresh_by_key_.emplace(c.canonical_key(), id);
    }
    return nz;
}

int Normalizer::intern_input(const std::string& name) {
    if (auto id = tbox_.concepts_.find(name)) return *id;
    if (!name.empty() && name[0] == '_')
        throw Error("concept name '" + name + "' uses the reserved '_' prefix");
    return tbox_.concepts_.intern(name);
}

int Normalizer::intern_role(const std::string& name) {
    if (auto id = tbox_.roles_.find(name)) return *id;
    if (!name.empty() && name[0] == '_')
        throw Error("role name '" + name + "' uses the reserved '_' prefix");
    return tbox_.roles_.intern(name);
}

int Normalizer::declare(const std::string& concept_name) {
    return intern_input(concept_name);
}

int Normalizer::fresh_name() {
    return tbox_.concepts_.intern("_n" + std::to_string(fresh_counter_++));
}

int Normalizer::concept_id(const Concept& c) {
    if (c.kind() == Concept::Kind::Top) return NormalizedTBox::kTop;
    assert(c.kind() == Concept::Kind::Atomic);
    return intern_input(c.name());
}

std::size_t Normalizer::emit(NormalizedAxiom ax, bool definition) {
    auto it = axiom_index_.find(ax);
    std::size_t index;
    if (it != axiom_index_.end()) {
        index = it->second;
    } else {
        index = tbox_.axioms_.size();
        tbox_.axioms_.push_back(ax);
        axiom_index_.emplace(ax, index);
    }
    if (definition) {
        assert(defining_ >= 0);
        def_axioms_of_[defining_].push_back(index);
    } else if (skeleton_sink_) {
        skeleton_sink_->push_back(index);
    }
    return index;
}

// Emits axioms making `id` interchangeable with `c` (both directions).
void Normalizer::define_as(int id, const Concept& c, bool definition) {
    int saved = defining_;
    defining_ = definition ? id : defining_;
    switch (c.kind()) {
    case Concept::Kind::Atomic:
    case Concept::Kind::Top: {
        int other = concept_id(c);
        emit({AxiomForm::AtomSub, id, -1, -1, -1, other}, definition);
        emit({AxiomForm::AtomSub, other, -1, -1, -1, id}, definition);
        break;
    }
    case Concept::Kind::Exists: {
        int role = intern_role(c.role());
        int ff = atomize(c.filler());
        emit({AxiomForm::SubExists, id, -1, role, ff, -1}, definition);
        emit({AxiomForm::ExistsSub, -1, -1, role, ff, id}, definition);
        break;
    }
    case Concept::Kind::And: {
        std::vector<int> ns;
        for (const Concept& part : c.conjuncts()) ns.push_back(atomize(part));
        std::sort(ns.begin(), ns.end());
        ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
        if (ns.size() == 1) {
            emit({AxiomForm::AtomSub, id, -1, -1, -1, ns[0]}, definition);
            emit({AxiomForm::AtomSub, ns[0], -1, -1, -1, id}, definition);
            break;
        }
        for (int n : ns) emit({AxiomForm::AtomSub, id, -1, -1, -1, n}, definition);
        int cur = ns[0];
        for (std::size_t i = 1; i + 1 < ns.size(); ++i) {
            Concept pair = Concept::conj(Concept::atomic(tbox_.concepts_.name(cur)),
                                         Concept::atomic(tbox_.concepts_.name(ns[i])));
            cur = atomize(pair);
        }
        emit({AxiomForm::ConjSub, cur, ns.back(), -1, -1, id}, definition);
        break;
    }
    }
    defining_ = saved;
}

// Returns a plain name for `c`, introducing and defining a generated
// name for complex concepts.  Equal concepts (up to conjunction order)
// share one name.
int Normalizer::atomize(const Concept& c) {
    if (c.kind() == Concept::Kind::Atomic || c.kind() == Concept::Kind::Top)
        return concept_id(c);
    std::string key = c.canonical_key();
    auto it = fresh_by_key_.find(key);
    if (it != fresh_by_key_.end()) {
        touched_.insert(it->second);
        return it->second;
    }
    int id = fresh_name();
    fresh_by_key_.emplace(std::move(key), id);
    tbox_.fresh_definitions_.emplace(id, c);
    touched_.insert(id);

    std::set<int> outer_touched = std::move(touched_);
    touched_.clear();
    define_as(id, c, true);
    deps_of_[id] = touched_;
    outer_touched.insert(touched_.begin(), touched_.end());
    touched_ = std::move(outer_touched);
    return id;
}

void Normalizer::emit_normal(const Concept& lhs, const Concept& rhs) {
    using K = Concept::Kind;
    if (rhs.kind() == K::Top) return; // trivially valid
    if (rhs.kind() == K::Exists) {
        int role = intern_role(rhs.role());
        int ff = atomize(rhs.filler());
        if (lhs.kind() == K::Atomic || lhs.kind() == K::Top) {
            emit({AxiomForm::SubExists, concept_id(lhs), -1, role, ff, -1}, false);
        } else {
            int ln = atomize(lhs);
            emit({AxiomForm::SubExists, ln, -1, role, ff, -1}, false);
        }
        return;
    }
    assert(rhs.kind() == K::Atomic);
    int sup = concept_id(rhs);
    switch (lhs.kind()) {
    case K::Atomic:
    case K::Top:
        emit({AxiomForm::AtomSub, concept_id(lhs), -1, -1, -1, sup}, false);
        break;
    case K::Exists: {
        int role = intern_role(lhs.role());
        int ff = atomize(lhs.filler());
        emit({AxiomForm::ExistsSub, -1, -1, role, ff, sup}, false);
        break;
    }
    case K::And: {
        std::vector<int> ns;
        for (const Concept& part : lhs.conjuncts()) ns.push_back(atomize(part));
        std::sort(ns.begin(), ns.end());
        ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
        if (ns.size() == 1) {
            emit({AxiomForm::AtomSub, ns[0], -1, -1, -1, sup}, false);
            break;
        }
        int cur = ns[0];
        for (std::size_t i = 1; i + 1 < ns.size(); ++i) {
            Concept pair = Concept::conj(Concept::atomic(tbox_.concepts_.name(cur)),
                                         Concept::atomic(tbox_.concepts_.name(ns[i])));
            cur = atomize(pair);
        }
        emit({AxiomForm::ConjSub, cur, ns.back(), -1, -1, sup}, false);
        break;
    }
    }
}

void Normalizer::split_rhs(const Concept& lhs, const Concept& rhs) {
    if (rhs.kind() == Concept::Kind::And) {
        for (const Concept& part : rhs.conjuncts()) emit_normal(lhs, part);
    } else {
        emit_normal(lhs, rhs);
    }
}

std::vector<int> Normalizer::closure(const std::set<int>& touched) const {
    std::set<int> seen = touched;
    std::deque<int> pending(touched.begin(), touched.end());
    while (!pending.empty()) {
        int f = pending.front();
        pending.pop_front();
        auto it = deps_of_.find(f);
        if (it == deps_of_.end()) continue;
        for (int d : it->second)
            if (seen.insert(d).second) pending.push_back(d);
    }
    return {seen.begin(), seen.end()};
}

Normalizer::Added Normalizer::add(const Gci& gci) {
    Added added;
    touched_.clear();
    skeleton_sink_ = &added.skeleton;
    split_rhs(gci.lhs, gci.rhs);
    skeleton_sink_ = nullptr;
    added.fresh_closure = closure(touched_);
    return added;
}

Normalizer::QueryHandles Normalizer::add_query(const Gci& query) {
    if (query_added_) throw Error("query already added to this normalizer");
    query_added_ = true;
    QueryHandles qh;
    qh.lhs_id = tbox_.concepts_.intern("_q_lhs");
    qh.rhs_id = tbox_.concepts_.intern("_q_rhs");
    tbox_.fresh_definitions_.emplace(qh.lhs_id, query.lhs);
    tbox_.fresh_definitions_.emplace(qh.rhs_id, query.rhs);
    touched_.clear();
    skeleton_sink_ = &qh.added.skeleton;
    define_as(qh.lhs_id, query.lhs, false);
    define_as(qh.rhs_id, query.rhs, false);
    skeleton_sink_ = nullptr;
    qh.added.fresh_closure = closure(touched_);
    return qh;
}

const std::vector<std::size_t>& Normalizer::definition_axioms(int fresh_id) const {
    static const std::vector<std::size_t> empty;
    auto it = def_axioms_of_.find(fresh_id);
    return it == def_axioms_of_.end() ? empty : it->second;
}

NormalizedTBox normalize(const std::vector<Gci>& tbox) {
    Normalizer nz;
    for (const Gci& gci : tbox) nz.add(gci);
    return nz.take();
}

namespace {

// Completion state: subsumers[a] is S(a), role_succ[r][a] the set of b
// with (a, b) in R(r).  Saturates the four rules to a fixpoint.
struct Completion {
    int n = 0;
    std::vector<std::vector<bool>> subsumers;
    std::vector<std::vector<std::vector<int>>> role_succ;

    // Rules indexed for retrieval.
    std::vector<std::vector<const NormalizedAxiom*>> by_sub;    // AtomSub/SubExists keyed by sub1
    std::vector<std::vector<const NormalizedAxiom*>> conj_by_sub; // ConjSub keyed by sub1 and sub2
    std::vector<std::vector<const NormalizedAxiom*>> exists_by_filler; // ExistsSub keyed by filler

    std::deque<std::pair<int, int>> queue; // pending (a, b): b entered S(a)
    std::deque<std::pair<int, std::pair<int, int>>> role_queue; // pending r, (a, b)

    explicit Completion(const NormalizedTBox& tbox) {
        n = tbox.concept_names().size();
        int roles = tbox.role_names().size();
        subsumers.assign(n, std::vector<bool>(n, false));
        role_succ.assign(roles, std::vector<std::vector<int>>(n));
        by_sub.assign(n, {});
        conj_by_sub.assign(n, {});
        exists_by_filler.assign(n, {});
        for (const NormalizedAxiom& ax : tbox.axioms()) {
            switch (ax.form) {
            case AxiomForm::AtomSub:
            case AxiomForm::SubExists:
                by_sub[ax.sub1].push_back(&ax);
                break;
            case AxiomForm::ConjSub:
                conj_by_sub[ax.sub1].push_back(&ax);
                if (ax.sub2 != ax.sub1) conj_by_sub[ax.sub2].push_back(&ax);
                break;
            case AxiomForm::ExistsSub:
                exists_by_filler[ax.filler].push_back(&ax);
                break;
            }
        }
        for (int a = 0; a < n; ++a) {
            insert(a, a);
            insert(a, NormalizedTBox::kTop);
        }
        run();
    }

    void insert(int a, int b) {
        if (subsumers[a][b]) return;
        subsumers[a][b] = true;
        queue.emplace_back(a, b);
    }

    void insert_role(int r, int a, int b) {
        auto& succ = role_succ[r][a];
        if (std::find(succ.begin(), succ.end(), b) != succ.end()) return;
        succ.push_back(b);
        role_queue.push_back({r, {a, b}});
    }

    void run() {
        while (!queue.empty() || !role_queue.empty()) {
            if (!queue.empty()) {
                auto [a, b] = queue.front(); // b entered S(a)
                queue.pop_front();
                for (const NormalizedAxiom* ax : by_sub[b]) {
                    if (ax->form == AxiomForm::AtomSub)
                        insert(a, ax->sup);
                    else
                        insert_role(ax->role, a, ax->filler);
                }
                for (const NormalizedAxiom* ax : conj_by_sub[b])
                    if (subsumers[a][ax->sub1] && subsumers[a][ax->sub2]) insert(a, ax->sup);
                // Edges ending in a whose existential premise just matched.
                for (const NormalizedAxiom* ax : exists_by_filler[b])
                    for (int src = 0; src < n; ++src) {
                        const auto& succ = role_succ[ax->role][src];
                        if (std::find(succ.begin(), succ.end(), a) != succ.end())
                            insert(src, ax->sup);
                    }
            } else {
                auto [r, edge] = role_queue.front(); // (a, b) entered R(r)
                role_queue.pop_front();
                auto [a, b] = edge;
                for (int f = 0; f < n; ++f) {
                    if (!subsumers[b][f]) continue;
                    for (const NormalizedAxiom* ax : exists_by_filler[f])
                        if (ax->role == r) insert(a, ax->sup);
                }
            }
        }
    }
};

} // namespace

std::set<std::pair<std::string, std::string>> classify(const NormalizedTBox& tbox) {
    Completion comp(tbox);
    std::set<std::pair<std::string, std::string>> out;
    for (int a = 0; a < comp.n; ++a) {
        if (a == NormalizedTBox::kTop) continue;
        for (int b = 0; b < comp.n; ++b)
            if (comp.subsumers[a][b])
                out.emplace(tbox.concept_names().name(a), tbox.concept_names().name(b));
    }
    return out;
}

bool entails(const std::vector<Gci>& tbox, const Gci& query) {
    Normalizer nz;
    for (const Gci& gci : tbox) nz.add(gci);
    auto qh = nz.add_query(query);
    Completion comp(nz.tbox());
    return comp.subsumers[qh.lhs_id][qh.rhs_id];
}

bool entails(const NormalizedTBox& tbox, const Gci& query) {
    Normalizer nz = Normalizer::from(tbox);
    auto qh = nz.add_query(query);
    Completion comp(nz.tbox());
    return comp.subsumers[qh.lhs_id][qh.rhs_id];
}

} // namespace dbel
