#include "sleec/engine/machine.hpp"

#include <algorithm>

#include "sleec/analysis/analysis.hpp"

namespace sleec::engine {

using syntax::Condition;
using syntax::Predicate;
using syntax::RelOp;

const char* ethics_status_name(EthicsStatus s) {
  return s == EthicsStatus::Respectful ? "respectful" : "critical";
}

Modifier Modifier::from_atom(const syntax::ObligationAtom& atom) {
  Modifier m;
  switch (atom.modifier) {
    case syntax::ObligationAtom::Modifier::None:
      m.kind = Kind::None;
      break;
    case syntax::ObligationAtom::Modifier::After:
      m.kind = Kind::After;
      m.duration_ns = atom.duration.to_nanos();
      break;
    case syntax::ObligationAtom::Modifier::Within:
      m.kind = Kind::Within;
      m.duration_ns = atom.duration.to_nanos();
      m.fallback = atom.fallback;
      break;
  }
  return m;
}

namespace {

/// Replaces derived-predicate references with their defining expressions.
/// Derived definitions only mention monitored variables, so one pass is
/// enough.
Condition inline_derived(const Condition& c, const syntax::VocabularyDecl& vocab) {
  switch (c.op) {
    case Condition::Op::Atom: {
      if (c.atom.kind == Predicate::Kind::BoolRef) {
        if (const auto* def = vocab.find_derived(c.atom.name)) return def->condition;
      }
      return c;
    }
    case Condition::Op::Not:
      return Condition::make_not(inline_derived(c.children.front(), vocab));
    case Condition::Op::And:
    case Condition::Op::Or: {
      std::vector<Condition> children;
      children.reserve(c.children.size());
      for (const auto& child : c.children) children.push_back(inline_derived(child, vocab));
      return c.op == Condition::Op::And ? Condition::make_and(std::move(children))
                                        : Condition::make_or(std::move(children));
    }
  }
  return c;
}

bool compare_int(std::int64_t lhs, RelOp op, std::int64_t rhs) {
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

bool compare_real(double lhs, RelOp op, double rhs) {
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

}  // namespace

class Compiler {
 public:
  explicit Compiler(const syntax::Ruleset& rs) : rs_(rs) {}

  void build(RuleMachine& m) {
    for (const auto& var : rs_.vocabulary.monitored) {
      RuleMachine::Slot slot;
      slot.name = var.name;
      slot.kind = var.kind;
      for (std::uint32_t i = 0; i < var.enum_members.size(); ++i)
        slot.enum_index[var.enum_members[i]] = i;
      m.slot_index_[var.name] = static_cast<std::uint32_t>(m.slots_.size());
      m.slots_.push_back(std::move(slot));
    }
    auto add_capability = [&m](const std::string& name) {
      if (!m.capability_index_.count(name)) {
        m.capability_index_[name] = static_cast<std::uint32_t>(m.capabilities_.size());
        m.capabilities_.push_back(name);
      }
    };
    add_capability(syntax::kNoopCapability);
    for (const auto& cap : rs_.vocabulary.capabilities) add_capability(cap.name);

    for (const auto& rule : rs_.rules) {
      RuleMachine::CompiledRule compiled;
      compiled.id = rule.id;
      Condition base = rule.base_condition;
      if (rule.scope) {
        std::vector<Condition> parts;
        parts.push_back(rs_.vocabulary.find_scope(*rule.scope)->condition);
        parts.push_back(std::move(base));
        base = Condition::make_and(std::move(parts));
      }
      compiled.clauses.push_back(compile_clause(m, base, rule.base_obligation));
      for (const auto& hedge : rule.hedges)
        compiled.clauses.push_back(compile_clause(m, hedge.condition, hedge.obligation));
      m.rules_.push_back(std::move(compiled));
    }

    for (const auto& inv : rs_.invariants) {
      RuleMachine::Invariant compiled;
      compiled.name = inv.name;
      emit(m, inline_derived(inv.condition, rs_.vocabulary), compiled.condition);
      m.invariants_.push_back(std::move(compiled));
    }
  }

 private:
  RuleMachine::Clause compile_clause(RuleMachine& m, const Condition& cond,
                                     const syntax::Obligation& obl) {
    RuleMachine::Clause clause;
    emit(m, inline_derived(cond, rs_.vocabulary), clause.condition);
    for (const auto& atom : obl.atoms) {
      if (atom.capability == syntax::kNoopCapability) continue;
      clause.atoms.push_back(
          {m.capability_index_.at(atom.capability), Modifier::from_atom(atom)});
    }
    return clause;
  }

  void emit(RuleMachine& m, const Condition& c, RuleMachine::Program& out) {
    switch (c.op) {
      case Condition::Op::Atom:
        emit_predicate(m, c.atom, out);
        break;
      case Condition::Op::Not:
        emit(m, c.children.front(), out);
        out.push_back({RuleMachine::OpCode::Not, 0});
        break;
      case Condition::Op::And:
      case Condition::Op::Or: {
        const auto op = c.op == Condition::Op::And ? RuleMachine::OpCode::And
                                                   : RuleMachine::OpCode::Or;
        emit(m, c.children[0], out);
        for (std::size_t i = 1; i < c.children.size(); ++i) {
          emit(m, c.children[i], out);
          out.push_back({op, 0});
        }
        break;
      }
    }
  }

  void emit_predicate(RuleMachine& m, const Predicate& p, RuleMachine::Program& out) {
    switch (p.kind) {
      case Predicate::Kind::Constant:
        out.push_back({RuleMachine::OpCode::PushConst, p.value ? 1u : 0u});
        return;
      case Predicate::Kind::Enforced:
        out.push_back({RuleMachine::OpCode::PushCap, m.capability_index_.at(p.name)});
        return;
      case Predicate::Kind::BoolRef: {
        RuleMachine::Pred pred;
        pred.kind = RuleMachine::Pred::Kind::BoolVar;
        pred.slot = m.slot_index_.at(p.name);
        push_pred(m, pred, out);
        return;
      }
      case Predicate::Kind::Compare: {
        RuleMachine::Pred pred;
        pred.slot = m.slot_index_.at(p.name);
        pred.op = p.op;
        const auto& slot = m.slots_[pred.slot];
        switch (slot.kind) {
          case syntax::ValueKind::Integer:
            pred.kind = RuleMachine::Pred::Kind::CmpInt;
            pred.int_rhs = p.rhs.int_value;
            break;
          case syntax::ValueKind::Real:
            pred.kind = RuleMachine::Pred::Kind::CmpReal;
            pred.real_rhs = p.rhs.kind == syntax::Literal::Kind::Integer
                                ? static_cast<double>(p.rhs.int_value)
                                : p.rhs.real_value;
            break;
          case syntax::ValueKind::Enum:
            pred.kind = RuleMachine::Pred::Kind::CmpEnum;
            pred.enum_rhs = slot.enum_index.at(p.rhs.name);
            break;
          case syntax::ValueKind::Boolean:
            // rejected by well-formedness; unreachable after compile checks
            pred.kind = RuleMachine::Pred::Kind::BoolVar;
            break;
        }
        push_pred(m, pred, out);
        return;
      }
    }
  }

  void push_pred(RuleMachine& m, const RuleMachine::Pred& pred, RuleMachine::Program& out) {
    out.push_back({RuleMachine::OpCode::PushPred, static_cast<std::uint32_t>(m.preds_.size())});
    m.preds_.push_back(pred);
  }

  const syntax::Ruleset& rs_;
};

RuleMachine compile(const syntax::Ruleset& rs) {
  auto diags = analysis::check_well_formed(rs);
  if (has_errors(diags)) throw CompileError(std::move(diags));
  RuleMachine m;
  Compiler(rs).build(m);
  return m;
}

std::vector<RuleMachine::Bound> RuleMachine::bind(const ConditionSnapshot& snap,
                                                  SnapshotMode mode) const {
  std::vector<Bound> bound(slots_.size());
  for (const auto& [name, value] : snap.values) {
    auto it = slot_index_.find(name);
    if (it == slot_index_.end()) continue;  // extra bindings are ignored
    const Slot& slot = slots_[it->second];
    Bound& b = bound[it->second];
    b.present = true;
    switch (slot.kind) {
      case syntax::ValueKind::Boolean:
        if (!std::holds_alternative<bool>(value))
          throw StepError(StepErrorCode::TypeMismatch,
                          "expected boolean for '" + name + "'", {{"variable", name}});
        b.b = std::get<bool>(value);
        break;
      case syntax::ValueKind::Integer:
        if (!std::holds_alternative<std::int64_t>(value))
          throw StepError(StepErrorCode::TypeMismatch,
                          "expected integer for '" + name + "'", {{"variable", name}});
        b.i = std::get<std::int64_t>(value);
        break;
      case syntax::ValueKind::Real:
        if (std::holds_alternative<double>(value))
          b.r = std::get<double>(value);
        else if (std::holds_alternative<std::int64_t>(value))
          b.r = static_cast<double>(std::get<std::int64_t>(value));
        else
          throw StepError(StepErrorCode::TypeMismatch, "expected real for '" + name + "'",
                          {{"variable", name}});
        break;
      case syntax::ValueKind::Enum: {
        if (!std::holds_alternative<std::string>(value))
          throw StepError(StepErrorCode::TypeMismatch,
                          "expected enumerant for '" + name + "'", {{"variable", name}});
        auto member = slot.enum_index.find(std::get<std::string>(value));
        if (member == slot.enum_index.end())
          throw StepError(StepErrorCode::TypeMismatch,
                          "'" + std::get<std::string>(value) + "' is not a member of '" +
                              name + "'",
                          {{"variable", name}});
        b.e = member->second;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (bound[i].present) continue;
    if (mode == SnapshotMode::Lenient && slots_[i].kind == syntax::ValueKind::Boolean) {
      bound[i].present = true;
      bound[i].b = false;
      continue;
    }
    throw StepError(StepErrorCode::MissingBinding,
                    "no binding for monitored variable '" + slots_[i].name + "'",
                    {{"variable", slots_[i].name}});
  }
  return bound;
}

bool RuleMachine::eval(const Program& prog, const std::vector<Bound>& bound,
                       const std::vector<bool>& enforced) const {
  // depth bound follows from the parser's nesting limit
  bool stack[512];
  int top = -1;
  for (const Instr& ins : prog) {
    switch (ins.op) {
      case OpCode::PushConst:
        stack[++top] = ins.arg != 0;
        break;
      case OpCode::PushCap:
        stack[++top] = ins.arg < enforced.size() && enforced[ins.arg];
        break;
      case OpCode::PushPred: {
        const Pred& p = preds_[ins.arg];
        const Bound& b = bound[p.slot];
        bool v = false;
        switch (p.kind) {
          case Pred::Kind::BoolVar: v = b.b; break;
          case Pred::Kind::CmpInt: v = compare_int(b.i, p.op, p.int_rhs); break;
          case Pred::Kind::CmpReal: v = compare_real(b.r, p.op, p.real_rhs); break;
          case Pred::Kind::CmpEnum:
            v = p.op == syntax::RelOp::Eq ? b.e == p.enum_rhs : b.e != p.enum_rhs;
            break;
        }
        stack[++top] = v;
        break;
      }
      case OpCode::Not:
        stack[top] = !stack[top];
        break;
      case OpCode::And: {
        bool rhs = stack[top--];
        stack[top] = stack[top] && rhs;
        break;
      }
      case OpCode::Or: {
        bool rhs = stack[top--];
        stack[top] = stack[top] || rhs;
        break;
      }
    }
  }
  return top >= 0 && stack[top];
}

int RuleMachine::active_index(const CompiledRule& rule, const std::vector<Bound>& bound) const {
  static const std::vector<bool> no_caps;
  int active = -1;
  for (std::size_t i = 0; i < rule.clauses.size(); ++i) {
    if (!eval(rule.clauses[i].condition, bound, no_caps)) break;
    active = static_cast<int>(i);
  }
  return active;
}

std::optional<int> RuleMachine::active_clause_index(std::size_t rule_index,
                                                    const ConditionSnapshot& snap,
                                                    SnapshotMode mode) const {
  const auto bound = bind(snap, mode);
  int idx = active_index(rules_[rule_index], bound);
  if (idx < 0) return std::nullopt;
  return idx;
}

ObligationSet RuleMachine::step(const ConditionSnapshot& snap, SnapshotMode mode) const {
  const auto bound = bind(snap, mode);

  // outputs start from reset on every step
  struct Entry {
    Modifier modifier;
    std::vector<Provenance> provenance;
    bool used = false;
  };
  std::vector<Entry> entries(capabilities_.size());

  for (const auto& rule : rules_) {
    const int active = active_index(rule, bound);
    if (active < 0) continue;
    for (const auto& atom : rule.clauses[active].atoms) {
      Entry& e = entries[atom.capability];
      if (e.used && e.modifier != atom.modifier) {
        throw StepError(
            StepErrorCode::ConflictingConstraints,
            "capability '" + capabilities_[atom.capability] +
                "' enforced with conflicting temporal constraints",
            {{"capability", capabilities_[atom.capability]}, {"rule", rule.id}});
      }
      e.used = true;
      e.modifier = atom.modifier;
      e.provenance.push_back({rule.id, active});
    }
  }

  std::vector<bool> enforced(capabilities_.size(), false);
  for (std::size_t c = 0; c < entries.size(); ++c) enforced[c] = entries[c].used;

  static const std::vector<Bound> no_bound;
  for (const auto& inv : invariants_) {
    if (!eval(inv.condition, no_bound, enforced)) {
      nlohmann::json caps = nlohmann::json::array();
      for (std::size_t c = 0; c < entries.size(); ++c)
        if (entries[c].used) caps.push_back(capabilities_[c]);
      throw StepError(StepErrorCode::InvariantViolation,
                      "obligation invariant '" + inv.name + "' violated",
                      {{"invariant", inv.name}, {"enforced", caps}});
    }
  }

  ObligationSet out;
  for (std::size_t c = 0; c < entries.size(); ++c) {
    if (!entries[c].used) continue;
    Entry& e = entries[c];
    std::sort(e.provenance.begin(), e.provenance.end());
    e.provenance.erase(std::unique(e.provenance.begin(), e.provenance.end()),
                       e.provenance.end());
    out.directives.push_back({capabilities_[c], e.modifier, std::move(e.provenance)});
  }
  std::sort(out.directives.begin(), out.directives.end());
  out.status = out.directives.empty() ? EthicsStatus::Respectful : EthicsStatus::Critical;
  return out;
}

}  // namespace sleec::engine
