#include "dbel/kbformat.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

#include "dbel/error.hpp"

namespace dbel {

std::string Diagnostic::to_string() const {
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_identifier(std::string_view s) {
    if (s.empty() || !ident_start(s[0])) return false;
    return std::all_of(s.begin() + 1, s.end(), ident_char);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

// ---- concept expression parsing -------------------------------------

struct Token {
    enum Kind { Ident, KwTop, KwAnd, KwExists, Dot, LParen, RParen, End } kind;
    std::string text;
    int pos; // 0-based offset in the input
};

std::vector<Token> lex_concept(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        int pos = static_cast<int>(i);
        if (c == '.') {
            out.push_back({Token::Dot, ".", pos});
            ++i;
        } else if (c == '(') {
            out.push_back({Token::LParen, "(", pos});
            ++i;
        } else if (c == ')') {
            out.push_back({Token::RParen, ")", pos});
            ++i;
        } else if (ident_start(c)) {
            std::size_t j = i + 1;
            while (j < text.size() && ident_char(text[j])) ++j;
            std::string word(text.substr(i, j - i));
            Token::Kind kind = word == "top"      ? Token::KwTop
                               : word == "and"    ? Token::KwAnd
                               : word == "exists" ? Token::KwExists
                                                  : Token::Ident;
            out.push_back({kind, std::move(word), pos});
            i = j;
        } else {
            throw Error("unexpected character '" + std::string(1, c) +
                        "' in concept expression");
        }
    }
    out.push_back({Token::End, "", static_cast<int>(text.size())});
    return out;
}

class ConceptParser {
public:
    explicit ConceptParser(std::string_view text) : tokens_(lex_concept(text)) {}

    Concept parse() {
        Concept c = expr();
        expect(Token::End, "end of expression");
        return c;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    Token take() { return tokens_[pos_++]; }

    void expect(Token::Kind kind, const std::string& what) {
        if (peek().kind != kind)
            throw Error("expected " + what + " but found '" +
                        (peek().kind == Token::End ? "end of input" : peek().text) + "'");
        ++pos_;
    }

    Concept expr() {
        Concept c = primary();
        while (peek().kind == Token::KwAnd) {
            take();
            c = Concept::conj(std::move(c), primary());
        }
        return c;
    }

    Concept primary() {
        switch (peek().kind) {
        case Token::KwTop:
            take();
            return Concept::top();
        case Token::Ident:
            return Concept::atomic(take().text);
        case Token::KwExists: {
            take();
            if (peek().kind != Token::Ident)
                throw Error("expected a role name after 'exists'");
            std::string role = take().text;
            expect(Token::Dot, "'.'");
            return Concept::exists(std::move(role), filler());
        }
        case Token::LParen: {
            take();
            Concept c = expr();
            expect(Token::RParen, "')'");
            return c;
        }
        default:
            throw Error("expected a concept but found '" +
                        (peek().kind == Token::End ? "end of input" : peek().text) + "'");
        }
    }

    // Complex fillers must be parenthesized.
    Concept filler() {
        switch (peek().kind) {
        case Token::KwTop:
            take();
            return Concept::top();
        case Token::Ident:
            return Concept::atomic(take().text);
        case Token::LParen: {
            take();
            Concept c = expr();
            expect(Token::RParen, "')'");
            return c;
        }
        default:
            throw Error("expected an existential filler (atom, top, or parenthesized)");
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// ---- KB document parsing ---------------------------------------------

struct CptRow {
    int line = 0;
    std::string child;                                  // prime stripped
    bool child_primed = false;
    std::vector<std::pair<std::string, bool>> cond;     // name (may keep prime), value
    double prob = 0.0;
};

// Splits `child | cond = prob`; the last '=' separates the probability.
CptRow parse_cpt_row(std::string_view text, int line) {
    CptRow row;
    row.line = line;
    std::size_t bar = text.find('|');
    if (bar == std::string_view::npos) throw Error("expected '|' after the child variable");
    std::string_view child = trim(text.substr(0, bar));
    if (!child.empty() && child.back() == '\'') {
        row.child_primed = true;
        child = trim(child.substr(0, child.size() - 1));
    }
    if (!is_identifier(child)) throw Error("invalid child variable name");
    row.child = std::string(child);

    std::string_view rest = text.substr(bar + 1);
    std::size_t eq = rest.rfind('=');
    if (eq == std::string_view::npos) throw Error("expected '=' before the probability");
    std::string_view prob_text = trim(rest.substr(eq + 1));
    std::string_view cond_text = trim(rest.substr(0, eq));

    if (!cond_text.empty()) {
        for (std::string_view item : split(cond_text, ',')) {
            item = trim(item);
            std::size_t ieq = item.find('=');
            if (ieq == std::string_view::npos)
                throw Error("expected 'name=0' or 'name=1' in the condition");
            std::string_view name = trim(item.substr(0, ieq));
            std::string_view value = trim(item.substr(ieq + 1));
            bool primed = false;
            if (!name.empty() && name.back() == '\'') {
                primed = true;
                name = trim(name.substr(0, name.size() - 1));
            }
            if (!is_identifier(name)) throw Error("invalid variable name in the condition");
            if (value != "0" && value != "1")
                throw Error("condition value must be 0 or 1");
            row.cond.emplace_back(std::string(name) + (primed ? "'" : ""), value == "1");
        }
    }

    if (prob_text.empty()) throw Error("missing probability");
    auto [end, ec] = std::from_chars(prob_text.data(), prob_text.data() + prob_text.size(),
                                     row.prob);
    if (ec != std::errc{} || end != prob_text.data() + prob_text.size())
        throw Error("invalid probability '" + std::string(prob_text) + "'");
    if (!(row.prob >= 0.0 && row.prob <= 1.0))
        throw Error("probability must lie in [0,1]");
    return row;
}

struct SectionLines {
    int header_line = 0;
    std::vector<std::pair<int, std::string>> lines; // (line number, text)
    bool present = false;
};

// Assembles CPTs from rows, resolving names through `resolve` (which
// returns -1 for invalid names and reports its own message).  Enforces
// per-child parent-set consistency, completeness, and uniqueness.
class CptAssembler {
public:
    struct PerChild {
        int first_line = 0;
        std::vector<std::string> parent_names; // order of the first row
        std::vector<int> parent_ids;
        std::map<std::size_t, double> rows;    // parent assignment -> prob
    };

    void add(const CptRow& row, const std::vector<int>& parent_ids, int child_id) {
        auto [it, fresh] = children_.try_emplace(child_id);
        PerChild& pc = it->second;
        if (fresh) {
            pc.first_line = row.line;
            for (const auto& [name, value] : row.cond) pc.parent_names.push_back(name);
            pc.parent_ids = parent_ids;
        } else {
            std::vector<std::string> names;
            for (const auto& [name, value] : row.cond) names.push_back(name);
            std::vector<std::string> a = names, b = pc.parent_names;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b)
                throw Error("rows for '" + row.child + "' disagree on the parent set");
        }
        std::size_t idx = 0;
        for (std::size_t j = 0; j < pc.parent_names.size(); ++j) {
            auto match = std::find_if(row.cond.begin(), row.cond.end(), [&](const auto& e) {
                return e.first == pc.parent_names[j];
            });
            if (match->second) idx |= std::size_t{1} << (pc.parent_names.size() - 1 - j);
        }
        if (!pc.rows.emplace(idx, row.prob).second)
            throw Error("duplicate row for '" + row.child + "'");
    }

    // One CPT per child; throws naming the first missing assignment.
    std::vector<Cpt> finish(const std::map<int, std::string>& child_names) {
        std::vector<Cpt> out;
        for (auto& [child_id, pc] : children_) {
            std::size_t expected = std::size_t{1} << pc.parent_names.size();
            if (pc.rows.size() != expected) {
                for (std::size_t idx = 0; idx < expected; ++idx)
                    if (!pc.rows.count(idx)) {
                        std::string assignment;
                        for (std::size_t j = 0; j < pc.parent_names.size(); ++j) {
                            if (j) assignment += ", ";
                            bool bit = (idx >> (pc.parent_names.size() - 1 - j)) & 1;
                            assignment += pc.parent_names[j] + "=" + (bit ? "1" : "0");
                        }
                        throw Error("missing row for '" + child_names.at(child_id) + "' with " +
                                    (assignment.empty() ? "no condition" : assignment));
                    }
            }
            Cpt cpt;
            cpt.child = child_id;
            cpt.parents = pc.parent_ids;
            cpt.prob_true.resize(expected);
            for (auto& [idx, p] : pc.rows) cpt.prob_true[idx] = p;
            out.push_back(std::move(cpt));
        }
        return out;
    }

    const std::map<int, PerChild>& children() const { return children_; }

private:
    std::map<int, PerChild> children_;
};

} // namespace

Concept parse_concept(std::string_view text) { return ConceptParser(text).parse(); }

Gci parse_gci(std::string_view text) {
    std::size_t pos = text.find("<=");
    if (pos == std::string_view::npos) throw Error("expected '<=' in the axiom");
    std::string_view lhs = trim(text.substr(0, pos));
    std::string_view rhs = trim(text.substr(pos + 2));
    if (lhs.empty() || rhs.empty()) throw Error("both sides of '<=' must be concepts");
    return {parse_concept(lhs), parse_concept(rhs)};
}

Context parse_context(std::string_view text, const Variables& vars) {
    text = trim(text);
    if (text.empty()) return Context();
    std::vector<Literal> lits;
    for (std::string_view item : split(text, ',')) {
        item = trim(item);
        bool positive = true;
        if (!item.empty() && item.front() == '!') {
            positive = false;
            item = trim(item.substr(1));
        }
        if (!is_identifier(item)) throw Error("invalid literal '" + std::string(item) + "'");
        auto var = vars.find(item);
        if (!var) throw Error("unknown variable '" + std::string(item) + "'");
        lits.push_back({*var, positive});
    }
    return Context(std::move(lits));
}

World parse_world(std::string_view text, const Variables& vars) {
    int n = vars.count();
    std::vector<int> assigned(n, -1);
    for (std::string_view item : split(text, ',')) {
        item = trim(item);
        if (item.empty()) throw Error("empty world assignment entry");
        std::size_t eq = item.find('=');
        if (eq == std::string_view::npos)
            throw Error("expected 'name=0' or 'name=1' in the world");
        std::string_view name = trim(item.substr(0, eq));
        std::string_view value = trim(item.substr(eq + 1));
        auto var = vars.find(name);
        if (!var) throw Error("unknown variable '" + std::string(name) + "'");
        if (value != "0" && value != "1") throw Error("world value must be 0 or 1");
        if (assigned[*var] >= 0) throw Error("variable '" + std::string(name) + "' assigned twice");
        assigned[*var] = value == "1" ? 1 : 0;
    }
    World w(0, n);
    for (int v = 0; v < n; ++v) {
        if (assigned[v] < 0)
            throw Error("world does not assign variable '" + vars.name(v) + "'");
        w = w.with(v, assigned[v] == 1);
    }
    return w;
}

TimedEvidence parse_evidence(std::string_view text, const Variables& vars) {
    TimedEvidence out;
    text = trim(text);
    if (text.empty()) return out;
    for (std::string_view item : split(text, ',')) {
        item = trim(item);
        std::size_t at = item.find('@');
        if (at == std::string_view::npos)
            throw Error("expected 'name@slice=value' in the evidence");
        std::string_view name = trim(item.substr(0, at));
        std::string_view rest = item.substr(at + 1);
        std::size_t eq = rest.find('=');
        if (eq == std::string_view::npos)
            throw Error("expected 'name@slice=value' in the evidence");
        std::string_view slice_text = trim(rest.substr(0, eq));
        std::string_view value = trim(rest.substr(eq + 1));
        auto var = vars.find(name);
        if (!var) throw Error("unknown variable '" + std::string(name) + "'");
        int slice = 0;
        auto [end, ec] = std::from_chars(slice_text.data(), slice_text.data() + slice_text.size(),
                                         slice);
        if (ec != std::errc{} || end != slice_text.data() + slice_text.size() || slice < 1)
            throw Error("evidence slice must be a positive integer");
        if (value != "0" && value != "1") throw Error("evidence value must be 0 or 1");
        out.items.push_back({*var, slice, value == "1"});
    }
    if (!out.consistent()) throw Error("inconsistent evidence");
    return out;
}

ParseResult parse_kb(std::string_view text) {
    ParseResult result;
    SectionLines vars_sec, bn_sec, tbn_sec, ont_sec;

    {
        int line_no = 0;
        SectionLines* current = nullptr;
        for (std::string_view raw : split(text, '\n')) {
            ++line_no;
            std::string_view line = raw;
            if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            SectionLines* target = nullptr;
            if (line == "[variables]") target = &vars_sec;
            else if (line == "[bn]") target = &bn_sec;
            else if (line == "[tbn]") target = &tbn_sec;
            else if (line == "[ontology]") target = &ont_sec;
            if (target) {
                if (target->present) {
                    result.diagnostics.push_back(
                        {line_no, 1, "duplicate section " + std::string(line)});
                    return result;
                }
                target->present = true;
                target->header_line = line_no;
                current = target;
                continue;
            }
            if (line.front() == '[') {
                result.diagnostics.push_back({line_no, 1, "unknown section " + std::string(line)});
                return result;
            }
            if (!current) {
                result.diagnostics.push_back({line_no, 1, "content before the first section"});
                return result;
            }
            current->lines.emplace_back(line_no, std::string(line));
        }
    }
    for (const auto& [sec, name] :
         {std::pair{&vars_sec, "[variables]"}, {&bn_sec, "[bn]"}, {&tbn_sec, "[tbn]"},
          {&ont_sec, "[ontology]"}}) {
        if (!sec->present)
            result.diagnostics.push_back({1, 1, std::string("missing section ") + name});
    }
    if (!result.diagnostics.empty()) return result;

    // One diagnostic per section: the first problem aborts the section.
    Variables vars;
    bool vars_ok = true;
    for (const auto& [line_no, line] : vars_sec.lines) {
        std::string spaced = line;
        std::replace(spaced.begin(), spaced.end(), ',', ' ');
        std::size_t i = 0;
        while (i < spaced.size() && vars_ok) {
            while (i < spaced.size() && std::isspace(static_cast<unsigned char>(spaced[i]))) ++i;
            if (i >= spaced.size()) break;
            std::size_t j = i;
            while (j < spaced.size() && !std::isspace(static_cast<unsigned char>(spaced[j]))) ++j;
            std::string name = spaced.substr(i, j - i);
            if (!is_identifier(name)) {
                result.diagnostics.push_back(
                    {line_no, static_cast<int>(i) + 1, "invalid variable name '" + name + "'"});
                vars_ok = false;
                break;
            }
            if (vars.find(name)) {
                result.diagnostics.push_back(
                    {line_no, static_cast<int>(i) + 1, "duplicate variable '" + name + "'"});
                vars_ok = false;
                break;
            }
            vars.declare(name);
            i = j;
        }
        if (!vars_ok) break;
    }
    if (vars_ok && vars.count() == 0) {
        result.diagnostics.push_back({vars_sec.header_line, 1, "no variables declared"});
        vars_ok = false;
    }
    int n = vars.count();

    BayesNet initial;
    if (vars_ok) {
        initial.vars = vars;
        CptAssembler assembler;
        std::map<int, std::string> names;
        bool ok = true;
        for (const auto& [line_no, line] : bn_sec.lines) {
            try {
                CptRow row = parse_cpt_row(line, line_no);
                if (row.child_primed) throw Error("primed variables belong in [tbn]");
                auto child = vars.find(row.child);
                if (!child) throw Error("undeclared variable '" + row.child + "'");
                std::vector<int> parent_ids;
                for (const auto& [name, value] : row.cond) {
                    if (!name.empty() && name.back() == '\'')
                        throw Error("primed variables belong in [tbn]");
                    auto p = vars.find(name);
                    if (!p) throw Error("undeclared variable '" + name + "'");
                    parent_ids.push_back(*p);
                }
                names.emplace(*child, row.child);
                assembler.add(row, parent_ids, *child);
            } catch (const Error& e) {
                result.diagnostics.push_back({line_no, 1, e.what()});
                ok = false;
                break;
            }
        }
        if (ok) {
            try {
                initial.cpts = assembler.finish(names);
                for (const std::string& problem : validate(initial))
                    throw Error(problem);
            } catch (const Error& e) {
                result.diagnostics.push_back({bn_sec.header_line, 1, e.what()});
            }
        }
    }

    TwoSliceNet transition;
    if (vars_ok) {
        transition.vars = vars;
        CptAssembler assembler;
        std::map<int, std::string> names;
        bool ok = true;
        for (const auto& [line_no, line] : tbn_sec.lines) {
            try {
                CptRow row = parse_cpt_row(line, line_no);
                if (!row.child_primed)
                    throw Error("transition rows must define primed variables (x')");
                auto child = vars.find(row.child);
                if (!child) throw Error("undeclared variable '" + row.child + "'");
                std::vector<int> parent_ids;
                for (const auto& [name, value] : row.cond) {
                    bool primed = !name.empty() && name.back() == '\'';
                    std::string base = primed ? name.substr(0, name.size() - 1) : name;
                    auto p = vars.find(base);
                    if (!p) throw Error("undeclared variable '" + base + "'");
                    parent_ids.push_back(primed ? n + *p : *p);
                }
                names.emplace(n + *child, row.child + "'");
                assembler.add(row, parent_ids, n + *child);
            } catch (const Error& e) {
                result.diagnostics.push_back({line_no, 1, e.what()});
                ok = false;
                break;
            }
        }
        if (ok) {
            try {
                transition.next_cpts = assembler.finish(names);
            } catch (const Error& e) {
                result.diagnostics.push_back({tbn_sec.header_line, 1, e.what()});
            }
        }
    }

    ContextualOntology ontology;
    if (vars_ok) {
        ontology.vars = vars;
        for (const auto& [line_no, line] : ont_sec.lines) {
            try {
                std::size_t at = line.rfind('@');
                if (at == std::string::npos)
                    throw Error("expected '@' and a context after the axiom");
                Gci gci = parse_gci(std::string_view(line).substr(0, at));
                Context ctx = parse_context(std::string_view(line).substr(at + 1), vars);
                ontology.axioms.push_back({std::move(gci), std::move(ctx)});
            } catch (const Error& e) {
                result.diagnostics.push_back({line_no, 1, e.what()});
                break;
            }
        }
    }

    if (!result.diagnostics.empty()) return result;

    KnowledgeBase kb{Dbn{std::move(initial), std::move(transition)}, std::move(ontology)};
    for (const std::string& problem : validate(kb))
        result.diagnostics.push_back({tbn_sec.header_line, 1, problem});
    if (!result.diagnostics.empty()) return result;
    result.kb = std::move(kb);
    return result;
}

std::string render_kb(const KnowledgeBase& kb) {
    const Variables& vars = kb.dbn.initial.vars;
    int n = vars.count();
    std::string out = "[variables]\n";
    for (int v = 0; v < n; ++v) out += (v ? ", " : "") + vars.name(v);
    out += "\n\n[bn]\n";
    auto render_rows = [&](const Cpt& cpt, const std::string& child) {
        std::string lines;
        for (std::size_t idx = 0; idx < cpt.prob_true.size(); ++idx) {
            std::string cond;
            for (std::size_t j = 0; j < cpt.parents.size(); ++j) {
                if (j) cond += ", ";
                int p = cpt.parents[j];
                std::string pname = p < n ? vars.name(p) : vars.name(p - n) + "'";
                bool bit = (idx >> (cpt.parents.size() - 1 - j)) & 1;
                cond += pname + "=" + (bit ? "1" : "0");
            }
            lines += child + " |" + (cond.empty() ? "" : " " + cond) + " = " +
                     format_double(cpt.prob_true[idx]) + "\n";
        }
        return lines;
    };
    for (const Cpt& cpt : kb.dbn.initial.cpts) out += render_rows(cpt, vars.name(cpt.child));
    out += "\n[tbn]\n";
    for (const Cpt& cpt : kb.dbn.transition.next_cpts)
        out += render_rows(cpt, vars.name(cpt.child - n) + "'");
    out += "\n[ontology]\n";
    for (const ContextualAxiom& ax : kb.ontology.axioms) {
        out += ax.gci.to_string() + " @";
        std::string lits;
        for (const Literal& lit : ax.context.literals()) {
            if (!lits.empty()) lits += ", ";
            lits += lit.to_string(vars);
        }
        if (!lits.empty()) out += " " + lits;
        out += "\n";
    }
    return out;
}

} // namespace dbel
