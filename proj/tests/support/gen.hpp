#pragma once

// Random well-formed rulesets and snapshots for property tests. Everything
// is declared before use, so generated rulesets always pass
// check_well_formed; conditions never bottom out in a bare FALSE (hedge
// conditions must not be literally FALSE).

#include <string>
#include <vector>

#include "sleec/analysis/analysis.hpp"
#include "sleec/engine/value.hpp"
#include "sleec/syntax/ast.hpp"
#include "sleec/util/rng.hpp"

namespace testgen {

using sleec::syntax::Condition;
using sleec::syntax::Predicate;
using sleec::syntax::RelOp;
using sleec::syntax::Ruleset;
using sleec::util::Rng;

struct Vocab {
  std::vector<std::string> bools;
  std::vector<std::string> ints;  // all RANGE -10 .. 30
  bool has_enum = false;
  std::vector<std::string> enum_members;
  std::vector<std::string> derived;
  std::vector<std::string> scopes;
  std::vector<std::string> caps;
};

inline RelOp random_relop(Rng& rng) {
  static const RelOp ops[] = {RelOp::Eq, RelOp::Ne, RelOp::Lt,
                              RelOp::Le, RelOp::Gt, RelOp::Ge};
  return ops[rng.below(6)];
}

inline Predicate random_predicate(const Vocab& v, Rng& rng, bool allow_derived) {
  for (;;) {
    switch (rng.below(5)) {
      case 0:
      case 1:
        return Predicate::bool_ref(v.bools[rng.below(v.bools.size())]);
      case 2:
        if (v.ints.empty()) continue;
        return Predicate::compare(v.ints[rng.below(v.ints.size())], random_relop(rng),
                                  sleec::syntax::Literal::integer(rng.range_i64(-12, 32)));
      case 3:
        if (!v.has_enum) continue;
        return Predicate::compare("mode", rng.coin() ? RelOp::Eq : RelOp::Ne,
                                  sleec::syntax::Literal::enumerant(
                                      v.enum_members[rng.below(v.enum_members.size())]));
      case 4:
        if (!allow_derived || v.derived.empty()) continue;
        return Predicate::bool_ref(v.derived[rng.below(v.derived.size())]);
    }
  }
}

inline Condition random_condition(const Vocab& v, Rng& rng, int depth, bool allow_derived) {
  if (depth <= 0 || rng.below(100) < 55)
    return Condition::make_atom(random_predicate(v, rng, allow_derived));
  switch (rng.below(4)) {
    case 0:
      return Condition::make_not(random_condition(v, rng, depth - 1, allow_derived));
    case 1: {
      std::vector<Condition> children;
      const auto n = 2 + rng.below(2);
      for (std::uint64_t i = 0; i < n; ++i)
        children.push_back(random_condition(v, rng, depth - 1, allow_derived));
      return Condition::make_and(std::move(children));
    }
    case 2: {
      std::vector<Condition> children;
      const auto n = 2 + rng.below(2);
      for (std::uint64_t i = 0; i < n; ++i)
        children.push_back(random_condition(v, rng, depth - 1, allow_derived));
      return Condition::make_or(std::move(children));
    }
    default:
      return Condition::make_atom(Predicate::constant(true));
  }
}

inline sleec::syntax::Obligation random_obligation(const Vocab& v, Rng& rng) {
  sleec::syntax::Obligation obl;
  const auto atoms = 1 + rng.below(2);
  for (std::uint64_t i = 0; i < atoms; ++i) {
    sleec::syntax::ObligationAtom atom;
    atom.capability =
        rng.below(10) == 0 ? "noop" : v.caps[rng.below(v.caps.size())];
    const auto kind = rng.below(10);
    if (kind < 2) {
      atom.modifier = sleec::syntax::ObligationAtom::Modifier::After;
      // durations drawn so that 60 SEC vs 1 MINUTE merges occur
      if (rng.coin())
        atom.duration = {60, sleec::syntax::TimeUnit::Sec};
      else
        atom.duration = {1, sleec::syntax::TimeUnit::Minute};
    } else if (kind == 2) {
      atom.modifier = sleec::syntax::ObligationAtom::Modifier::Within;
      atom.duration = {static_cast<std::int64_t>(1 + rng.below(120)),
                       sleec::syntax::TimeUnit::Sec};
      atom.fallback = v.caps[rng.below(v.caps.size())];
    }
    obl.atoms.push_back(std::move(atom));
  }
  return obl;
}

inline Ruleset random_ruleset(Rng& rng) {
  Vocab v;
  Ruleset rs;

  const auto n_bools = 3 + rng.below(4);
  for (std::uint64_t i = 0; i < n_bools; ++i) {
    const std::string name = "b" + std::to_string(i);
    v.bools.push_back(name);
    sleec::syntax::MonitoredVar var;
    var.name = name;
    var.kind = sleec::syntax::ValueKind::Boolean;
    rs.vocabulary.monitored.push_back(var);
  }
  const auto n_ints = rng.below(3);
  for (std::uint64_t i = 0; i < n_ints; ++i) {
    const std::string name = "t" + std::to_string(i);
    v.ints.push_back(name);
    sleec::syntax::MonitoredVar var;
    var.name = name;
    var.kind = sleec::syntax::ValueKind::Integer;
    var.int_min = -10;
    var.int_max = 30;
    rs.vocabulary.monitored.push_back(var);
  }
  if (rng.coin()) {
    v.has_enum = true;
    v.enum_members = {"ALPHA", "BETA", "GAMMA"};
    sleec::syntax::MonitoredVar var;
    var.name = "mode";
    var.kind = sleec::syntax::ValueKind::Enum;
    var.enum_members = v.enum_members;
    rs.vocabulary.monitored.push_back(var);
  }

  const auto n_caps = 3 + rng.below(4);
  for (std::uint64_t i = 0; i < n_caps; ++i) {
    const std::string name = "cap" + std::to_string(i);
    v.caps.push_back(name);
    rs.vocabulary.capabilities.push_back({name, {}});
  }

  const auto n_derived = rng.below(3);
  for (std::uint64_t i = 0; i < n_derived; ++i) {
    const std::string name = "d" + std::to_string(i);
    sleec::syntax::DerivedDef def;
    def.name = name;
    def.condition = random_condition(v, rng, 2, /*allow_derived=*/false);
    rs.vocabulary.derived.push_back(std::move(def));
    v.derived.push_back(name);
  }

  const auto n_scopes = rng.below(3);
  for (std::uint64_t i = 0; i < n_scopes; ++i) {
    const std::string name = "Sc" + std::to_string(i);
    sleec::syntax::ScopeDef def;
    def.name = name;
    def.condition = random_condition(v, rng, 2, /*allow_derived=*/true);
    rs.vocabulary.scopes.push_back(std::move(def));
    v.scopes.push_back(name);
  }

  if (rng.coin() && v.caps.size() >= 2) {
    sleec::syntax::ObligationInvariant inv;
    inv.name = "inv_1";
    inv.condition = Condition::make_not(Condition::make_and(
        {Condition::make_atom(Predicate::enforced(v.caps[0])),
         Condition::make_atom(Predicate::enforced(v.caps[1]))}));
    rs.invariants.push_back(std::move(inv));
  }

  const auto n_rules = 1 + rng.below(5);
  for (std::uint64_t i = 0; i < n_rules; ++i) {
    sleec::syntax::Rule rule;
    rule.id = "R" + std::to_string(i + 1);
    if (!v.scopes.empty() && rng.below(10) < 3) rule.scope = v.scopes[rng.below(v.scopes.size())];
    rule.base_condition = random_condition(v, rng, 3, true);
    rule.base_obligation = random_obligation(v, rng);
    const auto n_hedges = rng.below(4);
    for (std::uint64_t h = 0; h < n_hedges; ++h) {
      sleec::syntax::HedgeClause hedge;
      hedge.condition = random_condition(v, rng, 2, true);
      hedge.obligation = random_obligation(v, rng);
      rule.hedges.push_back(std::move(hedge));
    }
    rs.rules.push_back(std::move(rule));
  }
  return rs;
}

inline sleec::engine::ConditionSnapshot random_snapshot_for(const Ruleset& rs, Rng& rng,
                                                            std::uint64_t timestamp = 0) {
  return sleec::analysis::random_snapshot(rs.vocabulary, rng, timestamp);
}

}  // namespace testgen
