#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sleec/diagnostics.hpp"

namespace sleec::syntax {

/// Reserved capability with empty effect ("do nothing").
inline constexpr const char* kNoopCapability = "noop";

enum class RelOp { Eq, Ne, Lt, Le, Gt, Ge };

const char* relop_text(RelOp op);
RelOp negate(RelOp op);

enum class TimeUnit { Nanosec, Millisec, Sec, Minute, Hour };

const char* time_unit_name(TimeUnit u);
std::int64_t time_unit_nanos(TimeUnit u);

struct TimeDuration {
  std::int64_t amount = 0;
  TimeUnit unit = TimeUnit::Sec;

  std::int64_t to_nanos() const { return amount * time_unit_nanos(unit); }
  bool operator==(const TimeDuration&) const = default;
};

struct Literal {
  enum class Kind { Integer, Real, Name };
  Kind kind = Kind::Integer;
  std::int64_t int_value = 0;
  double real_value = 0.0;
  std::string name;  // enumerant reference

  static Literal integer(std::int64_t v) { return {Kind::Integer, v, 0.0, {}}; }
  static Literal real(double v) { return {Kind::Real, 0, v, {}}; }
  static Literal enumerant(std::string n) { return {Kind::Name, 0, 0.0, std::move(n)}; }

  bool operator==(const Literal&) const = default;
};

/// Condition leaf: a boolean variable reference, a relational comparison,
/// an enforced(capability) atom (invariants only), or a TRUE/FALSE constant.
struct Predicate {
  enum class Kind { BoolRef, Compare, Enforced, Constant };
  Kind kind = Kind::BoolRef;
  std::string name;          // variable (BoolRef/Compare) or capability (Enforced)
  RelOp op = RelOp::Eq;      // Compare
  Literal rhs;               // Compare
  bool value = false;        // Constant

  static Predicate bool_ref(std::string n) { return {Kind::BoolRef, std::move(n), RelOp::Eq, {}, false}; }
  static Predicate compare(std::string n, RelOp o, Literal l) {
    return {Kind::Compare, std::move(n), o, std::move(l), false};
  }
  static Predicate enforced(std::string cap) {
    return {Kind::Enforced, std::move(cap), RelOp::Eq, {}, false};
  }
  static Predicate constant(bool v) { return {Kind::Constant, {}, RelOp::Eq, {}, v}; }

  bool operator==(const Predicate&) const = default;
};

/// Expression tree over AND/OR/NOT with Predicate leaves. AND and OR nodes
/// are n-ary and never directly nest a child of the same operator; the
/// builders flatten, so redundant grouping parentheses do not survive
/// parsing and round-trips stay structural.
struct Condition {
  enum class Op { Atom, Not, And, Or };
  Op op = Op::Atom;
  Predicate atom;                   // Op::Atom
  std::vector<Condition> children;  // Not: 1; And/Or: >= 2

  static Condition make_atom(Predicate p);
  static Condition make_not(Condition c);
  static Condition make_and(std::vector<Condition> cs);
  static Condition make_or(std::vector<Condition> cs);

  bool is_constant_false() const {
    return op == Op::Atom && atom.kind == Predicate::Kind::Constant && !atom.value;
  }

  bool operator==(const Condition&) const = default;
};

struct ObligationAtom {
  enum class Modifier { None, After, Within };
  std::string capability;
  Modifier modifier = Modifier::None;
  TimeDuration duration;  // After / Within
  std::string fallback;   // Within

  bool operator==(const ObligationAtom&) const = default;
};

/// Conjunctive list of obligation atoms — all of them are to be enforced.
struct Obligation {
  std::vector<ObligationAtom> atoms;
  bool operator==(const Obligation&) const = default;
};

struct HedgeClause {
  Condition condition;
  Obligation obligation;
  bool operator==(const HedgeClause&) const = default;
};

/// One defeasible rule: base clause plus ordered hedge clauses. Hedge i in
/// `hedges` corresponds to defeating condition C_{i+1} / obligation O_{i+1};
/// later hedges take priority.
struct Rule {
  std::string id;
  std::optional<std::string> scope;
  Condition base_condition;
  Obligation base_obligation;
  std::vector<HedgeClause> hedges;
  SourcePos pos;  // of the RULE keyword; not part of structural equality

  int clause_count() const { return 1 + static_cast<int>(hedges.size()); }
  const Condition& condition(int clause) const {
    return clause == 0 ? base_condition : hedges[clause - 1].condition;
  }
  const Obligation& obligation(int clause) const {
    return clause == 0 ? base_obligation : hedges[clause - 1].obligation;
  }

  bool operator==(const Rule& o) const {
    return id == o.id && scope == o.scope && base_condition == o.base_condition &&
           base_obligation == o.base_obligation && hedges == o.hedges;
  }
};

enum class ValueKind { Boolean, Integer, Real, Enum };

const char* value_kind_name(ValueKind k);

struct MonitoredVar {
  std::string name;
  ValueKind kind = ValueKind::Boolean;
  std::vector<std::string> enum_members;     // Enum
  std::optional<std::int64_t> int_min, int_max;  // Integer range
  std::optional<double> real_min, real_max;      // Real range
  SourcePos pos;

  bool has_range() const {
    return kind == ValueKind::Integer ? int_min.has_value() : real_min.has_value();
  }

  bool operator==(const MonitoredVar& o) const {
    return name == o.name && kind == o.kind && enum_members == o.enum_members &&
           int_min == o.int_min && int_max == o.int_max && real_min == o.real_min &&
           real_max == o.real_max;
  }
};

struct CapabilityDecl {
  std::string name;
  SourcePos pos;
  bool operator==(const CapabilityDecl& o) const { return name == o.name; }
};

struct ScopeDef {
  std::string name;
  Condition condition;
  SourcePos pos;
  bool operator==(const ScopeDef& o) const {
    return name == o.name && condition == o.condition;
  }
};

struct DerivedDef {
  std::string name;
  Condition condition;
  SourcePos pos;
  bool operator==(const DerivedDef& o) const {
    return name == o.name && condition == o.condition;
  }
};

/// Boolean expression over enforced(capability) atoms that must hold on the
/// obligation set produced by every step.
struct ObligationInvariant {
  std::string name;
  Condition condition;
  SourcePos pos;
  bool operator==(const ObligationInvariant& o) const {
    return name == o.name && condition == o.condition;
  }
};

struct VocabularyDecl {
  std::vector<MonitoredVar> monitored;
  std::vector<CapabilityDecl> capabilities;
  std::vector<ScopeDef> scopes;
  std::vector<DerivedDef> derived;

  const MonitoredVar* find_monitored(const std::string& name) const;
  const ScopeDef* find_scope(const std::string& name) const;
  const DerivedDef* find_derived(const std::string& name) const;
  /// True for declared capabilities and the reserved `noop`.
  bool is_capability(const std::string& name) const;

  bool operator==(const VocabularyDecl&) const = default;
};

struct Ruleset {
  VocabularyDecl vocabulary;
  std::vector<Rule> rules;
  std::vector<ObligationInvariant> invariants;

  const Rule* find_rule(const std::string& id) const;

  bool operator==(const Ruleset&) const = default;
};

}  // namespace sleec::syntax
