#include "sleec/syntax/ast.hpp"

namespace sleec::syntax {

const char* relop_text(RelOp op) {
  switch (op) {
    case RelOp::Eq: return "=";
    case RelOp::Ne: return "!=";
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
  }
  return "?";
}

RelOp negate(RelOp op) {
  switch (op) {
    case RelOp::Eq: return RelOp::Ne;
    case RelOp::Ne: return RelOp::Eq;
    case RelOp::Lt: return RelOp::Ge;
    case RelOp::Ge: return RelOp::Lt;
    case RelOp::Gt: return RelOp::Le;
    case RelOp::Le: return RelOp::Gt;
  }
  return op;
}

const char* time_unit_name(TimeUnit u) {
  switch (u) {
    case TimeUnit::Nanosec: return "NANOSEC";
    case TimeUnit::Millisec: return "MILLISEC";
    case TimeUnit::Sec: return "SEC";
    case TimeUnit::Minute: return "MINUTE";
    case TimeUnit::Hour: return "HOUR";
  }
  return "?";
}

std::int64_t time_unit_nanos(TimeUnit u) {
  switch (u) {
    case TimeUnit::Nanosec: return 1;
    case TimeUnit::Millisec: return 1'000'000;
    case TimeUnit::Sec: return 1'000'000'000;
    case TimeUnit::Minute: return 60'000'000'000;
    case TimeUnit::Hour: return 3'600'000'000'000;
  }
  return 1;
}

const char* value_kind_name(ValueKind k) {
  switch (k) {
    case ValueKind::Boolean: return "boolean";
    case ValueKind::Integer: return "integer";
    case ValueKind::Real: return "real";
    case ValueKind::Enum: return "enum";
  }
  return "?";
}

Condition Condition::make_atom(Predicate p) {
  Condition c;
  c.op = Op::Atom;
  c.atom = std::move(p);
  return c;
}

Condition Condition::make_not(Condition inner) {
  Condition c;
  c.op = Op::Not;
  c.children.push_back(std::move(inner));
  return c;
}

namespace {
Condition make_nary(Condition::Op op, std::vector<Condition> cs) {
  if (cs.size() == 1) return std::move(cs.front());
  Condition c;
  c.op = op;
  for (auto& child : cs) {
    if (child.op == op) {
      for (auto& grand : child.children) c.children.push_back(std::move(grand));
    } else {
      c.children.push_back(std::move(child));
    }
  }
  return c;
}
}  // namespace

Condition Condition::make_and(std::vector<Condition> cs) {
  return make_nary(Op::And, std::move(cs));
}

Condition Condition::make_or(std::vector<Condition> cs) {
  return make_nary(Op::Or, std::move(cs));
}

const MonitoredVar* VocabularyDecl::find_monitored(const std::string& name) const {
  for (const auto& m : monitored)
    if (m.name == name) return &m;
  return nullptr;
}

const ScopeDef* VocabularyDecl::find_scope(const std::string& name) const {
  for (const auto& s : scopes)
    if (s.name == name) return &s;
  return nullptr;
}

const DerivedDef* VocabularyDecl::find_derived(const std::string& name) const {
  for (const auto& d : derived)
    if (d.name == name) return &d;
  return nullptr;
}

bool VocabularyDecl::is_capability(const std::string& name) const {
  if (name == kNoopCapability) return true;
  for (const auto& c : capabilities)
    if (c.name == name) return true;
  return false;
}

const Rule* Ruleset::find_rule(const std::string& id) const {
  for (const auto& r : rules)
    if (r.id == id) return &r;
  return nullptr;
}

}  // namespace sleec::syntax
