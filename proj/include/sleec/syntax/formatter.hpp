#pragma once

#include <string>

#include "sleec/syntax/ast.hpp"

namespace sleec::syntax {

/// Canonical pretty-printer. Parsing the output reproduces the input AST
/// structurally; grouping parentheses are emitted only where precedence
/// requires them.
std::string format_ruleset(const Ruleset& rs);

std::string format_condition(const Condition& c);
std::string format_obligation(const Obligation& o);

}  // namespace sleec::syntax
