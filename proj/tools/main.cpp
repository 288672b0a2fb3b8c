// Command-line interface over the knowledge-base library.
//
// Exit codes: 0 success, 1 query/computation error (including oracle
// disagreement), 2 parse or validation error.  Output is byte
// deterministic for fixed inputs.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dbel/error.hpp"
#include "dbel/kbformat.hpp"
#include "dbel/markov.hpp"
#include "dbel/reasoner.hpp"

namespace {

constexpr double kOracleTolerance = 1e-9;

struct Options {
    std::string kb_path;
    std::string query;
    std::string world;
    std::string evidence;
    std::string given;
    std::string format = "text";
    int time = 1;
    int horizon = 32;
    int precision = 6;
    bool oracle = false;
};

std::string fmt(double value, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

dbel::KnowledgeBase load_kb(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open '" << path << "'\n";
        std::exit(2);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    dbel::ParseResult parsed = dbel::parse_kb(buf.str());
    if (!parsed.ok()) {
        for (const dbel::Diagnostic& d : parsed.diagnostics)
            std::cerr << path << ": " << d.to_string() << "\n";
        std::exit(2);
    }
    return std::move(*parsed.kb);
}

// Parse errors in query-side inputs are input errors, not query errors.
template <typename F>
auto parse_or_exit(F&& f) {
    try {
        return f();
    } catch (const dbel::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::exit(2);
    }
}

[[noreturn]] void oracle_mismatch(double primary, double twin, int precision) {
    std::cerr << "oracle mismatch: primary " << fmt(primary, std::max(precision, 12))
              << " vs oracle " << fmt(twin, std::max(precision, 12)) << "\n";
    std::exit(1);
}

void check_oracle(double primary, double twin, int precision) {
    if (std::abs(primary - twin) > kOracleTolerance) oracle_mismatch(primary, twin, precision);
}

// Entailment of the query in each world, bypassing formula compilation.
std::vector<char> entailment_by_world(const dbel::KnowledgeBase& kb, const dbel::Gci& query) {
    int n = kb.ontology.vars.count();
    std::vector<char> out(std::size_t{1} << n, 0);
    for (std::uint64_t w = 0; w < out.size(); ++w)
        out[w] = dbel::entails_in_world(kb.ontology, dbel::World(w, n), query);
    return out;
}

double oracle_prob(const dbel::KnowledgeBase& kb, const dbel::Gci& query,
                   const dbel::Context& given) {
    int n = kb.ontology.vars.count();
    std::vector<char> ent = entailment_by_world(kb, query);
    double joint = 0.0, denom = 0.0;
    for (std::uint64_t w = 0; w < ent.size(); ++w) {
        dbel::World world(w, n);
        if (!given.holds_in(world)) continue;
        double p = dbel::world_prob(kb.dbn.initial, world);
        denom += p;
        if (ent[w]) joint += p;
    }
    if (denom == 0.0) throw dbel::Error("conditioning on zero-probability context");
    return joint / denom;
}

// Raw trajectory enumeration over the unrolled network.
double oracle_prob_at(const dbel::KnowledgeBase& kb, const dbel::Gci& query, int t,
                      const dbel::TimedEvidence& evidence) {
    int n = kb.ontology.vars.count();
    dbel::BayesNet rolled = dbel::unravel(kb.dbn, t);
    int total = rolled.vars.count();
    std::vector<char> ent = entailment_by_world(kb, query);
    std::uint64_t slice_mask = (std::uint64_t{1} << n) - 1;
    double joint = 0.0, denom = 0.0;
    for (std::uint64_t traj = 0; traj < (std::uint64_t{1} << total); ++traj) {
        dbel::World full(traj, total);
        bool consistent = true;
        for (const auto& item : evidence.items) {
            if (full.value((item.slice - 1) * n + item.var) != item.value) {
                consistent = false;
                break;
            }
        }
        if (!consistent) continue;
        double p = dbel::world_prob(rolled, full);
        denom += p;
        if (ent[traj & slice_mask]) joint += p;
    }
    if (denom == 0.0) throw dbel::Error("zero-probability evidence");
    return joint / denom;
}

void print_probability(const Options& opt, double p, bool with_time) {
    if (opt.format == "json") {
        std::cout << "{\"probability\": " << fmt(p, opt.precision);
        if (with_time) std::cout << ", \"time\": " << opt.time;
        std::cout << "}\n";
    } else {
        std::cout << fmt(p, opt.precision) << "\n";
    }
}

int run_check(const Options& opt) {
    load_kb(opt.kb_path); // exits with diagnostics when invalid
    if (opt.format == "json")
        std::cout << "{\"ok\": true}\n";
    else
        std::cout << "OK\n";
    return 0;
}

int run_entail(const Options& opt) {
    dbel::KnowledgeBase kb = load_kb(opt.kb_path);
    dbel::Gci query = parse_or_exit([&] { return dbel::parse_gci(opt.query); });
    dbel::World world =
        parse_or_exit([&] { return dbel::parse_world(opt.world, kb.ontology.vars); });
    bool entailed = dbel::entails_in_world(kb.ontology, world, query);
    if (opt.oracle) {
        bool twin = dbel::context_formula(kb, query).holds_in(world);
        if (twin != entailed) {
            std::cerr << "oracle mismatch: direct entailment and compiled formula disagree\n";
            return 1;
        }
    }
    if (opt.format == "json")
        std::cout << "{\"entailed\": " << (entailed ? "true" : "false") << "}\n";
    else
        std::cout << (entailed ? "true" : "false") << "\n";
    return 0;
}

int run_context_formula(const Options& opt) {
    dbel::KnowledgeBase kb = load_kb(opt.kb_path);
    dbel::Gci query = parse_or_exit([&] { return dbel::parse_gci(opt.query); });
    dbel::ContextFormula phi = dbel::context_formula(kb, query);
    if (opt.oracle) {
        int n = kb.ontology.vars.count();
        std::vector<char> ent = entailment_by_world(kb, query);
        for (std::uint64_t w = 0; w < ent.size(); ++w)
            if (static_cast<bool>(ent[w]) != phi.holds_in(dbel::World(w, n))) {
                std::cerr << "oracle mismatch: formula disagrees with per-world entailment\n";
                return 1;
            }
    }
    std::string rendered = phi.to_string(kb.ontology.vars);
    if (opt.format == "json")
        std::cout << "{\"formula\": \"" << json_escape(rendered) << "\"}\n";
    else
        std::cout << rendered << "\n";
    return 0;
}

int run_prob(const Options& opt) {
    dbel::KnowledgeBase kb = load_kb(opt.kb_path);
    dbel::Gci query = parse_or_exit([&] { return dbel::parse_gci(opt.query); });
    dbel::Context given =
        parse_or_exit([&] { return dbel::parse_context(opt.given, kb.ontology.vars); });
    double p = given.empty() ? dbel::prob(kb, query) : dbel::prob_given(kb, query, given);
    if (opt.oracle) check_oracle(p, oracle_prob(kb, query, given), opt.precision);
    print_probability(opt, p, false);
    return 0;
}

int run_prob_at(const Options& opt) {
    dbel::KnowledgeBase kb = load_kb(opt.kb_path);
    dbel::Gci query = parse_or_exit([&] { return dbel::parse_gci(opt.query); });
    dbel::TimedEvidence evidence =
        parse_or_exit([&] { return dbel::parse_evidence(opt.evidence, kb.ontology.vars); });
    double p = evidence.items.empty()
                   ? dbel::prob_at(kb, query, opt.time)
                   : dbel::prob_at_evidence(kb, query, opt.time, evidence);
    if (opt.oracle) check_oracle(p, oracle_prob_at(kb, query, opt.time, evidence), opt.precision);
    print_probability(opt, p, true);
    return 0;
}

int run_prob_within(const Options& opt) {
    dbel::KnowledgeBase kb = load_kb(opt.kb_path);
    dbel::Gci query = parse_or_exit([&] { return dbel::parse_gci(opt.query); });
    double p = dbel::prob_within(kb, query, opt.time);
    if (opt.oracle)
        check_oracle(p, dbel::prob_within_oracle(kb, query, opt.time), opt.precision);
    print_probability(opt, p, true);
    return 0;
}

int run_prob_eventually(const Options& opt) {
    dbel::KnowledgeBase kb = load_kb(opt.kb_path);
    dbel::Gci query = parse_or_exit([&] { return dbel::parse_gci(opt.query); });
    dbel::EventualResult r = dbel::prob_eventually(kb, query, opt.horizon);
    bool certain = r.kind == dbel::EventualKind::CertainOne;
    if (opt.format == "json") {
        std::cout << "{\"kind\": \"" << (certain ? "certain-one" : "indeterminate")
                  << "\", \"delta\": " << fmt(r.delta_value, opt.precision);
        if (!certain)
            std::cout << ", \"lower_bound\": " << fmt(r.lower_bound, opt.precision)
                      << ", \"horizon\": " << r.horizon_used;
        std::cout << "}\n";
    } else if (certain) {
        std::cout << "certain: probability 1 (delta = " << fmt(r.delta_value, opt.precision)
                  << ")\n";
    } else {
        std::cout << "indeterminate: lower bound " << fmt(r.lower_bound, opt.precision)
                  << " at horizon " << r.horizon_used << " (delta = "
                  << fmt(r.delta_value, opt.precision) << ")\n";
    }
    return 0;
}

int run_stationary(const Options& opt) {
    dbel::KnowledgeBase kb = load_kb(opt.kb_path);
    dbel::TransitionMatrix m = dbel::transition_matrix(kb.dbn.transition);
    dbel::ChainAnalysis analysis = dbel::analyze(m);
    if (opt.oracle) {
        for (const auto& pi : analysis.stationary)
            if (!dbel::stationary_check(m, pi)) {
                std::cerr << "oracle mismatch: solved vector fails the stationary check\n";
                return 1;
            }
    }
    const dbel::Variables& vars = kb.ontology.vars;
    if (opt.format == "json") {
        std::cout << "{\"recurrent_classes\": " << analysis.recurrent.size()
                  << ", \"irreducible\": " << (analysis.irreducible ? "true" : "false")
                  << ", \"aperiodic\": " << (analysis.aperiodic ? "true" : "false")
                  << ", \"classes\": [";
        for (std::size_t k = 0; k < analysis.recurrent.size(); ++k) {
            if (k) std::cout << ", ";
            std::cout << "{\"period\": " << analysis.period[k] << ", \"stationary\": [";
            bool first = true;
            for (std::uint64_t w : analysis.components[analysis.recurrent[k]]) {
                if (!first) std::cout << ", ";
                first = false;
                std::cout << "{\"world\": \""
                          << json_escape(dbel::World(w, m.var_count).to_string(vars))
                          << "\", \"probability\": " << fmt(analysis.stationary[k][w], opt.precision)
                          << "}";
            }
            std::cout << "]}";
        }
        std::cout << "]}\n";
    } else {
        std::cout << "recurrent classes: " << analysis.recurrent.size() << "\n";
        std::cout << "irreducible: " << (analysis.irreducible ? "yes" : "no") << "\n";
        std::cout << "aperiodic: " << (analysis.aperiodic ? "yes" : "no") << "\n";
        for (std::size_t k = 0; k < analysis.recurrent.size(); ++k) {
            std::cout << "class " << k << ": period " << analysis.period[k] << "\n";
            for (std::uint64_t w : analysis.components[analysis.recurrent[k]])
                std::cout << "  " << dbel::World(w, m.var_count).to_string(vars) << ": "
                          << fmt(analysis.stationary[k][w], opt.precision) << "\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probabilistic ontology queries over context-evolving knowledge bases"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub, bool with_query) {
        sub->add_option("--kb", opt.kb_path, "knowledge base file")->required();
        sub->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"text", "json"}))
            ->capture_default_str();
        sub->add_option("--precision", opt.precision, "decimal places for probabilities")
            ->check(CLI::Range(1, 12))
            ->capture_default_str();
        sub->add_flag("--oracle", opt.oracle,
                      "recompute via the brute-force twin and require agreement");
        if (with_query)
            sub->add_option("--query", opt.query, "query axiom, e.g. \"A <= B\"")->required();
    };

    CLI::App* check = app.add_subcommand("check", "parse and validate a knowledge base");
    add_common(check, false);

    CLI::App* entail = app.add_subcommand("entail", "entailment in one world");
    add_common(entail, true);
    entail->add_option("--world", opt.world, "total assignment, e.g. \"x=1, y=0\"")->required();

    CLI::App* cf = app.add_subcommand("context-formula", "compile the query's context formula");
    add_common(cf, true);

    CLI::App* prob = app.add_subcommand("prob", "probability of the query at the initial slice");
    add_common(prob, true);
    prob->add_option("--given", opt.given, "condition context, e.g. \"x, !z\"");

    CLI::App* prob_at = app.add_subcommand("prob-at", "probability at a time point");
    add_common(prob_at, true);
    prob_at->add_option("--time", opt.time, "time point (1-based)")
        ->required()
        ->check(CLI::PositiveNumber);
    prob_at->add_option("--evidence", opt.evidence, "timed evidence, e.g. \"x@1=1,y@3=0\"");

    CLI::App* prob_within = app.add_subcommand("prob-within", "probability within a time bound");
    add_common(prob_within, true);
    prob_within->add_option("--time", opt.time, "time bound (1-based)")
        ->required()
        ->check(CLI::PositiveNumber);

    CLI::App* prob_ev = app.add_subcommand("prob-eventually", "long-run verdict for the query");
    add_common(prob_ev, true);
    prob_ev->add_option("--horizon", opt.horizon, "lower-bound horizon when indeterminate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    CLI::App* stationary = app.add_subcommand("stationary", "analyze the induced world chain");
    add_common(stationary, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (opt.oracle && (check->parsed() || prob_ev->parsed())) {
        std::cerr << "error: no oracle available for this command\n";
        return 2;
    }

    try {
        if (check->parsed()) return run_check(opt);
        if (entail->parsed()) return run_entail(opt);
        if (cf->parsed()) return run_context_formula(opt);
        if (prob->parsed()) return run_prob(opt);
        if (prob_at->parsed()) return run_prob_at(opt);
        if (prob_within->parsed()) return run_prob_within(opt);
        if (prob_ev->parsed()) return run_prob_eventually(opt);
        if (stationary->parsed()) return run_stationary(opt);
    } catch (const dbel::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
