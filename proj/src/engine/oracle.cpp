#include "sleec/engine/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace sleec::engine {

using syntax::Condition;
using syntax::Predicate;
using syntax::RelOp;
using syntax::Ruleset;

namespace {

const Value& lookup(const Ruleset& rs, const ConditionSnapshot& snap, const std::string& name,
                    SnapshotMode mode) {
  static const Value kFalse = false;
  auto it = snap.values.find(name);
  if (it != snap.values.end()) return it->second;
  const auto* var = rs.vocabulary.find_monitored(name);
  if (mode == SnapshotMode::Lenient && var && var->kind == syntax::ValueKind::Boolean)
    return kFalse;
  throw StepError(StepErrorCode::MissingBinding,
                  "no binding for monitored variable '" + name + "'", {{"variable", name}});
}

template <typename T>
bool relate(const T& lhs, RelOp op, const T& rhs) {
  switch (op) {
    case RelOp::Eq: return lhs == rhs;
    case RelOp::Ne: return lhs != rhs;
    case RelOp::Lt: return lhs < rhs;
    case RelOp::Le: return lhs <= rhs;
    case RelOp::Gt: return lhs > rhs;
    case RelOp::Ge: return lhs >= rhs;
  }
  return false;
}

// Strict completeness is part of the contract: every monitored variable
// needs a binding up front, whether or not a rule happens to read it.
void require_complete(const Ruleset& rs, const ConditionSnapshot& snap, SnapshotMode mode) {
  for (const auto& var : rs.vocabulary.monitored) {
    if (snap.values.count(var.name)) continue;
    if (mode == SnapshotMode::Lenient && var.kind == syntax::ValueKind::Boolean) continue;
    throw StepError(StepErrorCode::MissingBinding,
                    "no binding for monitored variable '" + var.name + "'",
                    {{"variable", var.name}});
  }
}

class Interpreter {
 public:
  Interpreter(const Ruleset& rs, const ConditionSnapshot& snap, SnapshotMode mode)
      : rs_(rs), snap_(snap), mode_(mode) {}

  bool condition(const Condition& c) const {
    switch (c.op) {
      case Condition::Op::Atom:
        return predicate(c.atom);
      case Condition::Op::Not:
        return !condition(c.children.front());
      case Condition::Op::And:
        return std::all_of(c.children.begin(), c.children.end(),
                           [this](const Condition& ch) { return condition(ch); });
      case Condition::Op::Or:
        return std::any_of(c.children.begin(), c.children.end(),
                           [this](const Condition& ch) { return condition(ch); });
    }
    return false;
  }

  bool predicate(const Predicate& p) const {
    switch (p.kind) {
      case Predicate::Kind::Constant:
        return p.value;
      case Predicate::Kind::Enforced:
        throw StepError(StepErrorCode::TypeMismatch,
                        "enforced() is only meaningful in invariants", {});
      case Predicate::Kind::BoolRef: {
        if (const auto* def = rs_.vocabulary.find_derived(p.name))
          return condition(def->condition);
        const Value& v = lookup(rs_, snap_, p.name, mode_);
        if (!std::holds_alternative<bool>(v))
          throw StepError(StepErrorCode::TypeMismatch, "expected boolean for '" + p.name + "'",
                          {{"variable", p.name}});
        return std::get<bool>(v);
      }
      case Predicate::Kind::Compare: {
        const Value& v = lookup(rs_, snap_, p.name, mode_);
        const auto* var = rs_.vocabulary.find_monitored(p.name);
        switch (var ? var->kind : kind_of(v)) {
          case syntax::ValueKind::Integer: {
            if (!std::holds_alternative<std::int64_t>(v))
              throw StepError(StepErrorCode::TypeMismatch,
                              "expected integer for '" + p.name + "'", {{"variable", p.name}});
            return relate(std::get<std::int64_t>(v), p.op, p.rhs.int_value);
          }
          case syntax::ValueKind::Real: {
            double lhs;
            if (std::holds_alternative<double>(v))
              lhs = std::get<double>(v);
            else if (std::holds_alternative<std::int64_t>(v))
              lhs = static_cast<double>(std::get<std::int64_t>(v));
            else
              throw StepError(StepErrorCode::TypeMismatch,
                              "expected real for '" + p.name + "'", {{"variable", p.name}});
            double rhs = p.rhs.kind == syntax::Literal::Kind::Integer
                             ? static_cast<double>(p.rhs.int_value)
                             : p.rhs.real_value;
            return relate(lhs, p.op, rhs);
          }
          case syntax::ValueKind::Enum: {
            if (!std::holds_alternative<std::string>(v))
              throw StepError(StepErrorCode::TypeMismatch,
                              "expected enumerant for '" + p.name + "'",
                              {{"variable", p.name}});
            return relate(std::get<std::string>(v), p.op, p.rhs.name);
          }
          case syntax::ValueKind::Boolean:
            throw StepError(StepErrorCode::TypeMismatch,
                            "relational comparison on boolean '" + p.name + "'",
                            {{"variable", p.name}});
        }
        return false;
      }
    }
    return false;
  }

  /// All clause condition values, base first, scope conjoined into the base.
  std::vector<bool> clause_values(const syntax::Rule& rule) const {
    std::vector<bool> values;
    bool base = condition(rule.base_condition);
    if (rule.scope) {
      const auto* def = rs_.vocabulary.find_scope(*rule.scope);
      base = base && condition(def->condition);
    }
    values.push_back(base);
    for (const auto& hedge : rule.hedges) values.push_back(condition(hedge.condition));
    return values;
  }

  std::optional<int> active(const syntax::Rule& rule) const {
    const auto values = clause_values(rule);
    if (!values[0]) return std::nullopt;
    int last = 0;
    for (std::size_t i = 1; i < values.size() && values[i]; ++i) last = static_cast<int>(i);
    return last;
  }

 private:
  const Ruleset& rs_;
  const ConditionSnapshot& snap_;
  SnapshotMode mode_;
};

bool eval_invariant(const Condition& c, const std::set<std::string>& enforced) {
  switch (c.op) {
    case Condition::Op::Atom:
      if (c.atom.kind == Predicate::Kind::Constant) return c.atom.value;
      return enforced.count(c.atom.name) > 0;
    case Condition::Op::Not:
      return !eval_invariant(c.children.front(), enforced);
    case Condition::Op::And:
      return std::all_of(c.children.begin(), c.children.end(),
                         [&](const Condition& ch) { return eval_invariant(ch, enforced); });
    case Condition::Op::Or:
      return std::any_of(c.children.begin(), c.children.end(),
                         [&](const Condition& ch) { return eval_invariant(ch, enforced); });
  }
  return false;
}

}  // namespace

std::optional<int> oracle_active_clause(const Ruleset& rs, const syntax::Rule& rule,
                                        const ConditionSnapshot& snap, SnapshotMode mode) {
  require_complete(rs, snap, mode);
  return Interpreter(rs, snap, mode).active(rule);
}

// single-condition evaluation only needs the condition's own inputs
bool oracle_eval_condition(const Ruleset& rs, const syntax::Condition& cond,
                           const ConditionSnapshot& snap, SnapshotMode mode) {
  return Interpreter(rs, snap, mode).condition(cond);
}

ObligationSet oracle_step(const Ruleset& rs, const ConditionSnapshot& snap, SnapshotMode mode) {
  require_complete(rs, snap, mode);
  Interpreter interp(rs, snap, mode);

  std::map<std::string, std::pair<Modifier, std::vector<Provenance>>> collected;
  for (const auto& rule : rs.rules) {
    const auto active = interp.active(rule);
    if (!active) continue;
    for (const auto& atom : rule.obligation(*active).atoms) {
      if (atom.capability == syntax::kNoopCapability) continue;
      const Modifier mod = Modifier::from_atom(atom);
      auto [it, inserted] = collected.try_emplace(atom.capability, mod,
                                                  std::vector<Provenance>{});
      if (!inserted && it->second.first != mod)
        throw StepError(StepErrorCode::ConflictingConstraints,
                        "capability '" + atom.capability +
                            "' enforced with conflicting temporal constraints",
                        {{"capability", atom.capability}, {"rule", rule.id}});
      it->second.second.push_back({rule.id, *active});
    }
  }

  std::set<std::string> enforced;
  for (const auto& [cap, entry] : collected) enforced.insert(cap);
  for (const auto& inv : rs.invariants) {
    if (!eval_invariant(inv.condition, enforced)) {
      nlohmann::json caps(enforced);
      throw StepError(StepErrorCode::InvariantViolation,
                      "obligation invariant '" + inv.name + "' violated",
                      {{"invariant", inv.name}, {"enforced", caps}});
    }
  }

  ObligationSet out;
  for (auto& [cap, entry] : collected) {
    auto& provenance = entry.second;
    std::sort(provenance.begin(), provenance.end());
    provenance.erase(std::unique(provenance.begin(), provenance.end()), provenance.end());
    out.directives.push_back({cap, entry.first, std::move(provenance)});
  }
  std::sort(out.directives.begin(), out.directives.end());
  out.status = out.directives.empty() ? EthicsStatus::Respectful : EthicsStatus::Critical;
  return out;
}

}  // namespace sleec::engine
