// Line-oriented text format for knowledge bases, with located
// diagnostics, plus parsers for the small query-side languages
// (concept expressions, contexts, worlds, timed evidence).
//
// Document structure: the four sections [variables], [bn], [tbn],
// [ontology], each exactly once, in any order.  '#' starts a comment;
// blank lines are ignored.
//
//   [variables]   x, y, z
//   [bn]          y | x=1 = 0.25        (root: y | = 0.5)
//   [tbn]         x' | x=1 = 0.9        (children primed, parents may
//                                        mention both slices)
//   [ontology]    A and B <= exists r . C @ x, !y
//                                        (empty literal list after '@'
//                                         = axiom always active)

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dbel/context.hpp"
#include "dbel/el.hpp"
#include "dbel/reasoner.hpp"

namespace dbel {

struct Diagnostic {
    int line = 0;   // 1-based
    int column = 0; // 1-based
    std::string message;

    std::string to_string() const; // "line L, column C: message"
};

struct ParseResult {
    std::optional<KnowledgeBase> kb;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return kb.has_value() && diagnostics.empty(); }
};

// Parses and validates a KB document.  On failure kb is empty and
// diagnostics lists every detected problem with its location.
ParseResult parse_kb(std::string_view text);

// Renders a KB back to document text; the output reparses to a
// structurally identical KB.
std::string render_kb(const KnowledgeBase& kb);

// Query-side parsers.  All throw Error with a message that includes
// the offending token; names are resolved against vars where given.
Concept parse_concept(std::string_view text);
Gci parse_gci(std::string_view text);          // "C <= D"
Context parse_context(std::string_view text, const Variables& vars); // "x, !z"
World parse_world(std::string_view text, const Variables& vars);     // "x=1, y=0"
TimedEvidence parse_evidence(std::string_view text, const Variables& vars); // "x@1=1,y@3=0"

} // namespace dbel
