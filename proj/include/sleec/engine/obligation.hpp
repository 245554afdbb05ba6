#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "sleec/syntax/ast.hpp"

namespace sleec::engine {

/// Temporal constraint attached to a directive, normalized to nanoseconds so
/// that 60 SEC and 1 MINUTE are the same modifier.
struct Modifier {
  enum class Kind { None, After, Within };
  Kind kind = Kind::None;
  std::int64_t duration_ns = 0;  // After / Within
  std::string fallback;          // Within

  static Modifier none() { return {}; }
  static Modifier from_atom(const syntax::ObligationAtom& atom);

  auto operator<=>(const Modifier&) const = default;
};

/// (rule id, clause index) of an emitting clause; clause 0 is the base.
struct Provenance {
  std::string rule;
  int clause = 0;
  auto operator<=>(const Provenance&) const = default;
};

/// One capability to enforce. When several clauses emit the identical
/// (capability, modifier) pair the directives merge and `provenance` lists
/// every emitting clause, sorted, so step output is rule-order independent.
struct ObligationDirective {
  std::string capability;
  Modifier modifier;
  std::vector<Provenance> provenance;

  auto operator<=>(const ObligationDirective&) const = default;
};

enum class EthicsStatus { Respectful, Critical };

const char* ethics_status_name(EthicsStatus s);

/// Result of one evaluation step. `status` is Respectful exactly when the
/// directive set is empty (noop never contributes a directive).
struct ObligationSet {
  std::vector<ObligationDirective> directives;  // sorted
  EthicsStatus status = EthicsStatus::Respectful;

  bool operator==(const ObligationSet&) const = default;
};

}  // namespace sleec::engine
