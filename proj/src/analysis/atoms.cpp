#include "sleec/analysis/atoms.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace sleec::analysis {

using syntax::Condition;
using syntax::Predicate;
using syntax::RelOp;

namespace {

std::string literal_text(const syntax::Literal& lit) {
  switch (lit.kind) {
    case syntax::Literal::Kind::Integer:
      return std::to_string(lit.int_value);
    case syntax::Literal::Kind::Real: {
      char buf[64];
      auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), lit.real_value);
      (void)ec;
      return std::string(buf, p);
    }
    case syntax::Literal::Kind::Name:
      return lit.name;
  }
  return "?";
}

// Ops {=, <, <=} are the canonical half; the rest name the same atom with
// negative polarity.
bool canonical_op(RelOp op, RelOp& out) {
  switch (op) {
    case RelOp::Eq:
    case RelOp::Lt:
    case RelOp::Le:
      out = op;
      return true;
    case RelOp::Ne:
    case RelOp::Ge:
    case RelOp::Gt:
      out = syntax::negate(op);
      return false;
  }
  out = op;
  return true;
}

}  // namespace

std::pair<std::uint32_t, bool> AtomDomain::resolve(const Predicate& p) {
  std::string text;
  bool positive = true;
  switch (p.kind) {
    case Predicate::Kind::BoolRef:
      text = p.name;
      break;
    case Predicate::Kind::Enforced:
      text = "enforced(" + p.name + ")";
      break;
    case Predicate::Kind::Compare: {
      RelOp canon;
      positive = canonical_op(p.op, canon);
      text = p.name + " " + syntax::relop_text(canon) + " " + literal_text(p.rhs);
      break;
    }
    case Predicate::Kind::Constant:
      // handled by the caller; constants are not atoms
      text = p.value ? "true" : "false";
      break;
  }
  auto it = index_.find(text);
  if (it != index_.end()) return {it->second, positive};
  const auto idx = static_cast<std::uint32_t>(names_.size());
  index_.emplace(text, idx);
  names_.push_back(text);
  return {idx, positive};
}

AtomProgram AtomProgram::compile(const Condition& c, AtomDomain& domain) {
  AtomProgram prog;
  struct Emitter {
    AtomProgram& prog;
    AtomDomain& domain;
    void walk(const Condition& c) {
      switch (c.op) {
        case Condition::Op::Atom: {
          if (c.atom.kind == Predicate::Kind::Constant) {
            prog.code_.push_back({Ins::Op::PushConst, c.atom.value ? 1u : 0u, true});
            return;
          }
          auto [idx, positive] = domain.resolve(c.atom);
          prog.code_.push_back({Ins::Op::Push, idx, positive});
          return;
        }
        case Condition::Op::Not:
          walk(c.children.front());
          prog.code_.push_back({Ins::Op::Not, 0, true});
          return;
        case Condition::Op::And:
        case Condition::Op::Or: {
          const auto op = c.op == Condition::Op::And ? Ins::Op::And : Ins::Op::Or;
          walk(c.children[0]);
          for (std::size_t i = 1; i < c.children.size(); ++i) {
            walk(c.children[i]);
            prog.code_.push_back({op, 0, true});
          }
          return;
        }
      }
    }
  };
  Emitter{prog, domain}.walk(c);
  return prog;
}

bool AtomProgram::eval(const std::uint64_t* words) const {
  bool stack[512];
  int top = -1;
  for (const Ins& ins : code_) {
    switch (ins.op) {
      case Ins::Op::Push: {
        const bool bit = (words[ins.arg >> 6] >> (ins.arg & 63)) & 1u;
        stack[++top] = ins.positive ? bit : !bit;
        break;
      }
      case Ins::Op::PushConst:
        stack[++top] = ins.arg != 0;
        break;
      case Ins::Op::Not:
        stack[top] = !stack[top];
        break;
      case Ins::Op::And: {
        const bool rhs = stack[top--];
        stack[top] = stack[top] && rhs;
        break;
      }
      case Ins::Op::Or: {
        const bool rhs = stack[top--];
        stack[top] = stack[top] || rhs;
        break;
      }
    }
  }
  return top >= 0 && stack[top];
}

std::vector<std::uint32_t> AtomProgram::atoms_used() const {
  std::set<std::uint32_t> seen;
  for (const Ins& ins : code_)
    if (ins.op == Ins::Op::Push) seen.insert(ins.arg);
  return {seen.begin(), seen.end()};
}

RuleAtomView RuleAtomView::build(const syntax::Ruleset& rs, const syntax::Rule& rule,
                                 AtomDomain& domain) {
  RuleAtomView view;
  view.rule_id = rule.id;
  syntax::Condition base = rule.base_condition;
  if (rule.scope) {
    if (const auto* def = rs.vocabulary.find_scope(*rule.scope)) {
      std::vector<syntax::Condition> parts;
      parts.push_back(def->condition);
      parts.push_back(std::move(base));
      base = syntax::Condition::make_and(std::move(parts));
    }
  }
  view.clauses.push_back(AtomProgram::compile(base, domain));
  for (const auto& hedge : rule.hedges)
    view.clauses.push_back(AtomProgram::compile(hedge.condition, domain));
  return view;
}

std::optional<int> RuleAtomView::active(const std::uint64_t* words) const {
  int active = -1;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (!clauses[i].eval(words)) break;
    active = static_cast<int>(i);
  }
  if (active < 0) return std::nullopt;
  return active;
}

}  // namespace sleec::analysis
