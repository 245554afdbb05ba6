#pragma once

#include <string_view>

#include "sleec/syntax/ast.hpp"

namespace sleec::syntax {

/// Parses source text into a Ruleset and validates it (well-formedness).
/// Throws LexError/SyntaxError with positions, or SemanticError carrying the
/// diagnostic list when names don't resolve or types don't line up.
Ruleset parse_ruleset(std::string_view source);

/// Syntax-only variant: builds the AST without name resolution, so invalid
/// rulesets can be constructed for analysis.
Ruleset parse_ruleset_unchecked(std::string_view source);

}  // namespace sleec::syntax
