#include "sleec/syntax/formatter.hpp"

#include <charconv>
#include <sstream>

namespace sleec::syntax {

namespace {

std::string format_real(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  std::string s(buf, p);
  // keep reals lexically distinct from integers
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

std::string format_literal(const Literal& lit) {
  switch (lit.kind) {
    case Literal::Kind::Integer: return std::to_string(lit.int_value);
    case Literal::Kind::Real: return format_real(lit.real_value);
    case Literal::Kind::Name: return lit.name;
  }
  return "?";
}

std::string format_predicate(const Predicate& p) {
  switch (p.kind) {
    case Predicate::Kind::BoolRef:
      return p.name;
    case Predicate::Kind::Compare:
      return p.name + " " + relop_text(p.op) + " " + format_literal(p.rhs);
    case Predicate::Kind::Enforced:
      return std::string("ENFORCED(") + p.name + ")";
    case Predicate::Kind::Constant:
      return p.value ? "TRUE" : "FALSE";
  }
  return "?";
}

int precedence(Condition::Op op) {
  switch (op) {
    case Condition::Op::Or: return 0;
    case Condition::Op::And: return 1;
    case Condition::Op::Not: return 2;
    case Condition::Op::Atom: return 3;
  }
  return 3;
}

void write_condition(std::ostream& os, const Condition& c, int parent_prec) {
  const int prec = precedence(c.op);
  const bool parens = prec < parent_prec;
  if (parens) os << "(";
  switch (c.op) {
    case Condition::Op::Atom:
      os << format_predicate(c.atom);
      break;
    case Condition::Op::Not:
      os << "NOT ";
      write_condition(os, c.children.front(), precedence(Condition::Op::Not) + 1);
      break;
    case Condition::Op::And:
    case Condition::Op::Or: {
      const char* sep = c.op == Condition::Op::And ? " AND " : " OR ";
      bool first = true;
      for (const auto& child : c.children) {
        if (!first) os << sep;
        write_condition(os, child, prec + 1);
        first = false;
      }
      break;
    }
  }
  if (parens) os << ")";
}

std::string format_duration(const TimeDuration& d) {
  return std::to_string(d.amount) + " " + time_unit_name(d.unit);
}

void write_obligation_atom(std::ostream& os, const ObligationAtom& atom) {
  os << atom.capability;
  switch (atom.modifier) {
    case ObligationAtom::Modifier::None:
      break;
    case ObligationAtom::Modifier::After:
      os << " AFTER " << format_duration(atom.duration);
      break;
    case ObligationAtom::Modifier::Within:
      os << " WITHIN " << format_duration(atom.duration) << " OTHERWISE " << atom.fallback;
      break;
  }
}

void write_obligation(std::ostream& os, const Obligation& o) {
  bool first = true;
  for (const auto& atom : o.atoms) {
    if (!first) os << " AND ";
    write_obligation_atom(os, atom);
    first = false;
  }
}

void write_monitored(std::ostream& os, const MonitoredVar& var) {
  os << "MONITORED " << var.name << " : ";
  switch (var.kind) {
    case ValueKind::Boolean:
      os << "BOOLEAN";
      break;
    case ValueKind::Integer:
      os << "INTEGER";
      if (var.int_min) os << " RANGE " << *var.int_min << " .. " << *var.int_max;
      break;
    case ValueKind::Real:
      os << "REAL";
      if (var.real_min) os << " RANGE " << format_real(*var.real_min) << " .. "
                           << format_real(*var.real_max);
      break;
    case ValueKind::Enum: {
      os << "ENUM { ";
      bool first = true;
      for (const auto& m : var.enum_members) {
        if (!first) os << ", ";
        os << m;
        first = false;
      }
      os << " }";
      break;
    }
  }
  os << "\n";
}

}  // namespace

std::string format_condition(const Condition& c) {
  std::ostringstream os;
  write_condition(os, c, 0);
  return os.str();
}

std::string format_obligation(const Obligation& o) {
  std::ostringstream os;
  write_obligation(os, o);
  return os.str();
}

std::string format_ruleset(const Ruleset& rs) {
  std::ostringstream os;
  const auto& vocab = rs.vocabulary;
  for (const auto& var : vocab.monitored) write_monitored(os, var);
  for (const auto& cap : vocab.capabilities) os << "CAPABILITY " << cap.name << "\n";
  for (const auto& def : vocab.derived) {
    os << "DERIVED " << def.name << " = ";
    write_condition(os, def.condition, 0);
    os << "\n";
  }
  for (const auto& def : vocab.scopes) {
    os << "SCOPE " << def.name << " = ";
    write_condition(os, def.condition, 0);
    os << "\n";
  }
  for (const auto& inv : rs.invariants) {
    os << "INVARIANT " << inv.name << " ";
    write_condition(os, inv.condition, 0);
    os << "\n";
  }
  for (const auto& rule : rs.rules) {
    os << "\n";
    if (rule.scope) os << "SCOPE " << *rule.scope << "\n";
    os << "RULE " << rule.id << "\n";
    os << "IF ";
    write_condition(os, rule.base_condition, 0);
    os << " THEN ";
    write_obligation(os, rule.base_obligation);
    os << "\n";
    for (const auto& hedge : rule.hedges) {
      os << "UNLESS ";
      write_condition(os, hedge.condition, 0);
      os << " IN WHICH CASE ";
      write_obligation(os, hedge.obligation);
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace sleec::syntax
