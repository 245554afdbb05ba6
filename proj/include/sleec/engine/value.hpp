#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>

#include "sleec/syntax/ast.hpp"

namespace sleec::engine {

/// A monitored value: boolean, integer, real, or enumerant (by member name).
using Value = std::variant<bool, std::int64_t, double, std::string>;

inline syntax::ValueKind kind_of(const Value& v) {
  switch (v.index()) {
    case 0: return syntax::ValueKind::Boolean;
    case 1: return syntax::ValueKind::Integer;
    case 2: return syntax::ValueKind::Real;
    default: return syntax::ValueKind::Enum;
  }
}

/// Named monitored values observed at one instant. Strict completeness
/// (a binding for every monitored variable) is checked by the evaluators,
/// not here.
struct ConditionSnapshot {
  std::map<std::string, Value> values;
  std::uint64_t timestamp = 0;

  bool operator==(const ConditionSnapshot&) const = default;
};

enum class SnapshotMode {
  Strict,   // every monitored variable must be bound
  Lenient,  // missing booleans default to false; others still required
};

}  // namespace sleec::engine
