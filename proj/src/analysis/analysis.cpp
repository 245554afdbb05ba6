#include "sleec/analysis/analysis.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "sleec/analysis/atoms.hpp"
#include "sleec/engine/json_codec.hpp"
#include "sleec/engine/oracle.hpp"
#include "sleec/util/rng.hpp"

namespace sleec::analysis {

using syntax::Condition;
using syntax::Predicate;
using syntax::Ruleset;
using syntax::ValueKind;

namespace {

enum class ExprContext { RuleCondition, ScopeDef, DerivedDef, Invariant };

class WellFormedChecker {
 public:
  explicit WellFormedChecker(const Ruleset& rs) : rs_(rs) {}

  std::vector<Diagnostic> run() {
    check_vocabulary();
    check_rules();
    check_invariants();
    check_unused();
    return std::move(diags_);
  }

 private:
  void error(std::string code, std::string message, std::string rule = "", int clause = -1) {
    diags_.push_back({Severity::Error, std::move(code), std::move(message), std::move(rule),
                      clause, {}, 0});
  }
  void warn(std::string code, std::string message) {
    diags_.push_back({Severity::Warning, std::move(code), std::move(message), "", -1, {}, 0});
  }

  void check_vocabulary() {
    std::unordered_set<std::string> var_names;  // monitored + derived share a namespace
    for (const auto& var : rs_.vocabulary.monitored) {
      if (!var_names.insert(var.name).second)
        error("DUPLICATE_NAME", "monitored variable '" + var.name + "' declared twice");
      if (var.kind == ValueKind::Enum) {
        std::unordered_set<std::string> members;
        for (const auto& m : var.enum_members)
          if (!members.insert(m).second)
            error("DUPLICATE_NAME",
                  "enum member '" + m + "' repeated in '" + var.name + "'");
      }
      if ((var.kind == ValueKind::Integer || var.kind == ValueKind::Real) && !var.has_range())
        warn("NO_DECLARED_RANGE", "numeric variable '" + var.name +
                                      "' has no RANGE; random draws will be rejected");
    }
    std::unordered_set<std::string> caps;
    for (const auto& cap : rs_.vocabulary.capabilities) {
      if (cap.name == syntax::kNoopCapability) continue;  // implicitly present
      if (!caps.insert(cap.name).second)
        error("DUPLICATE_NAME", "capability '" + cap.name + "' declared twice");
    }
    std::unordered_set<std::string> scope_names;
    for (const auto& def : rs_.vocabulary.scopes) {
      if (!scope_names.insert(def.name).second)
        error("DUPLICATE_NAME", "scope '" + def.name + "' declared twice");
      check_condition(def.condition, ExprContext::ScopeDef, "", -1);
    }
    for (const auto& def : rs_.vocabulary.derived) {
      if (!var_names.insert(def.name).second)
        error("DUPLICATE_NAME",
              "derived predicate '" + def.name + "' collides with another declaration");
      check_condition(def.condition, ExprContext::DerivedDef, "", -1);
    }
  }

  void check_rules() {
    std::unordered_set<std::string> ids;
    for (const auto& rule : rs_.rules) {
      if (!ids.insert(rule.id).second)
        error("DUPLICATE_RULE_ID", "rule identifier '" + rule.id + "' used twice", rule.id);
      if (rule.scope && !rs_.vocabulary.find_scope(*rule.scope))
        error("UNDECLARED_SCOPE", "scope '" + *rule.scope + "' is not defined", rule.id);
      check_condition(rule.base_condition, ExprContext::RuleCondition, rule.id, 0);
      check_obligation(rule.base_obligation, rule.id, 0);
      for (std::size_t i = 0; i < rule.hedges.size(); ++i) {
        const auto& hedge = rule.hedges[i];
        const int clause = static_cast<int>(i) + 1;
        if (hedge.condition.is_constant_false())
          error("TRIVIAL_HEDGE", "hedge condition is literally FALSE", rule.id, clause);
        check_condition(hedge.condition, ExprContext::RuleCondition, rule.id, clause);
        check_obligation(hedge.obligation, rule.id, clause);
      }
    }
  }

  void check_invariants() {
    std::unordered_set<std::string> names;
    for (const auto& inv : rs_.invariants) {
      if (!names.insert(inv.name).second)
        error("DUPLICATE_NAME", "invariant '" + inv.name + "' declared twice");
      check_condition(inv.condition, ExprContext::Invariant, "", -1);
    }
  }

  void check_condition(const Condition& c, ExprContext ctx, const std::string& rule,
                       int clause) {
    switch (c.op) {
      case Condition::Op::Atom:
        check_predicate(c.atom, ctx, rule, clause);
        return;
      case Condition::Op::Not:
      case Condition::Op::And:
      case Condition::Op::Or:
        for (const auto& child : c.children) check_condition(child, ctx, rule, clause);
        return;
    }
  }

  void check_predicate(const Predicate& p, ExprContext ctx, const std::string& rule,
                       int clause) {
    switch (p.kind) {
      case Predicate::Kind::Constant:
        return;
      case Predicate::Kind::Enforced:
        if (ctx != ExprContext::Invariant) {
          error("ENFORCED_IN_CONDITION", "enforced() is only allowed in invariants", rule,
                clause);
          return;
        }
        if (!rs_.vocabulary.is_capability(p.name))
          error("UNDECLARED_CAPABILITY",
                "invariant references unknown capability '" + p.name + "'");
        return;
      case Predicate::Kind::BoolRef: {
        if (ctx == ExprContext::Invariant) {
          error("INVARIANT_ATOM", "invariants may only reference enforced(capability)");
          return;
        }
        const auto* var = rs_.vocabulary.find_monitored(p.name);
        const auto* derived = rs_.vocabulary.find_derived(p.name);
        if (ctx == ExprContext::DerivedDef && derived) {
          error("DERIVED_NOT_MONITORED",
                "derived definition references derived predicate '" + p.name + "'");
          return;
        }
        if (!var && !derived) {
          error("UNDECLARED_VARIABLE", "'" + p.name + "' is not declared", rule, clause);
          return;
        }
        if (var && var->kind != ValueKind::Boolean)
          error("TYPE_MISMATCH",
                "'" + p.name + "' is " + syntax::value_kind_name(var->kind) +
                    "; a bare reference needs a boolean",
                rule, clause);
        return;
      }
      case Predicate::Kind::Compare: {
        if (ctx == ExprContext::Invariant) {
          error("INVARIANT_ATOM", "invariants may only reference enforced(capability)");
          return;
        }
        const auto* var = rs_.vocabulary.find_monitored(p.name);
        if (!var) {
          if (rs_.vocabulary.find_derived(p.name))
            error("TYPE_MISMATCH",
                  "derived predicate '" + p.name + "' is boolean; it cannot be compared",
                  rule, clause);
          else
            error("UNDECLARED_VARIABLE", "'" + p.name + "' is not declared", rule, clause);
          return;
        }
        switch (var->kind) {
          case ValueKind::Boolean:
            error("TYPE_MISMATCH",
                  "boolean '" + p.name + "' cannot be compared; use the bare name", rule,
                  clause);
            return;
          case ValueKind::Integer:
            if (p.rhs.kind != syntax::Literal::Kind::Integer)
              error("TYPE_MISMATCH", "integer '" + p.name + "' compared with a non-integer",
                    rule, clause);
            return;
          case ValueKind::Real:
            if (p.rhs.kind == syntax::Literal::Kind::Name)
              error("TYPE_MISMATCH", "real '" + p.name + "' compared with a name", rule,
                    clause);
            return;
          case ValueKind::Enum:
            if (p.op != syntax::RelOp::Eq && p.op != syntax::RelOp::Ne) {
              error("TYPE_MISMATCH", "enum '" + p.name + "' only supports = and !=", rule,
                    clause);
              return;
            }
            if (p.rhs.kind != syntax::Literal::Kind::Name) {
              error("TYPE_MISMATCH", "enum '" + p.name + "' compared with a non-enumerant",
                    rule, clause);
              return;
            }
            if (std::find(var->enum_members.begin(), var->enum_members.end(), p.rhs.name) ==
                var->enum_members.end())
              error("UNKNOWN_ENUMERANT",
                    "'" + p.rhs.name + "' is not a member of '" + p.name + "'", rule, clause);
            return;
        }
        return;
      }
    }
  }

  void check_obligation(const syntax::Obligation& o, const std::string& rule, int clause) {
    if (o.atoms.empty())
      error("EMPTY_OBLIGATION", "obligation has no atoms", rule, clause);
    for (const auto& atom : o.atoms) {
      if (!rs_.vocabulary.is_capability(atom.capability))
        error("UNDECLARED_CAPABILITY", "capability '" + atom.capability + "' is not declared",
              rule, clause);
      if (atom.modifier != syntax::ObligationAtom::Modifier::None && atom.duration.amount <= 0)
        error("NONPOSITIVE_DURATION", "duration amount must be positive", rule, clause);
      if (atom.modifier == syntax::ObligationAtom::Modifier::Within &&
          !rs_.vocabulary.is_capability(atom.fallback))
        error("UNDECLARED_CAPABILITY",
              "fallback capability '" + atom.fallback + "' is not declared", rule, clause);
    }
  }

  // ---- usage ----

  void mark_condition(const Condition& c, std::set<std::string>& vars,
                      std::set<std::string>& derived) {
    switch (c.op) {
      case Condition::Op::Atom:
        if (c.atom.kind == Predicate::Kind::BoolRef ||
            c.atom.kind == Predicate::Kind::Compare) {
          if (const auto* def = rs_.vocabulary.find_derived(c.atom.name)) {
            if (derived.insert(def->name).second) mark_condition(def->condition, vars, derived);
          } else {
            vars.insert(c.atom.name);
          }
        }
        return;
      case Condition::Op::Not:
      case Condition::Op::And:
      case Condition::Op::Or:
        for (const auto& child : c.children) mark_condition(child, vars, derived);
        return;
    }
  }

  void check_unused() {
    std::set<std::string> used_vars, used_derived, used_scopes, used_caps;
    for (const auto& rule : rs_.rules) {
      if (rule.scope) {
        used_scopes.insert(*rule.scope);
        if (const auto* def = rs_.vocabulary.find_scope(*rule.scope))
          mark_condition(def->condition, used_vars, used_derived);
      }
      for (int clause = 0; clause < rule.clause_count(); ++clause) {
        mark_condition(rule.condition(clause), used_vars, used_derived);
        for (const auto& atom : rule.obligation(clause).atoms) {
          used_caps.insert(atom.capability);
          if (atom.modifier == syntax::ObligationAtom::Modifier::Within)
            used_caps.insert(atom.fallback);
        }
      }
    }
    for (const auto& inv : rs_.invariants) collect_enforced(inv.condition, used_caps);
    for (const auto& var : rs_.vocabulary.monitored)
      if (!used_vars.count(var.name))
        warn("UNUSED_MONITORED", "monitored variable '" + var.name + "' is never referenced");
    for (const auto& def : rs_.vocabulary.derived)
      if (!used_derived.count(def.name))
        warn("UNUSED_DERIVED", "derived predicate '" + def.name + "' is never referenced");
    for (const auto& def : rs_.vocabulary.scopes)
      if (!used_scopes.count(def.name))
        warn("UNUSED_SCOPE", "scope '" + def.name + "' is never attached to a rule");
    for (const auto& cap : rs_.vocabulary.capabilities)
      if (cap.name != syntax::kNoopCapability && !used_caps.count(cap.name))
        warn("UNUSED_CAPABILITY", "capability '" + cap.name + "' is never referenced");
  }

  void collect_enforced(const Condition& c, std::set<std::string>& caps) {
    if (c.op == Condition::Op::Atom) {
      if (c.atom.kind == Predicate::Kind::Enforced) caps.insert(c.atom.name);
      return;
    }
    for (const auto& child : c.children) collect_enforced(child, caps);
  }

  const Ruleset& rs_;
  std::vector<Diagnostic> diags_;
};

std::map<std::string, bool> witness_map(const AtomDomain& domain, const std::uint64_t* words) {
  std::map<std::string, bool> out;
  for (std::size_t i = 0; i < domain.size(); ++i)
    out[domain.name(i)] = ((words[i >> 6] >> (i & 63)) & 1u) != 0;
  return out;
}

/// Runs `fn(words)` for every assignment requested by the mode.
template <typename Fn>
void sweep(std::size_t atom_count, const Mode& mode, const char* what, Fn&& fn) {
  const std::size_t word_count = atom_count == 0 ? 1 : (atom_count + 63) / 64;
  std::vector<std::uint64_t> words(word_count, 0);
  if (mode.kind == Mode::Kind::Exhaustive) {
    if (atom_count > kExhaustiveAtomLimit)
      throw AnalysisError("ANALYSIS_TOO_LARGE",
                          std::string(what) + ": " + std::to_string(atom_count) +
                              " atoms exceed the exhaustive limit of " +
                              std::to_string(kExhaustiveAtomLimit) +
                              "; use sampled mode");
    const std::uint64_t total = 1ull << atom_count;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      words[0] = mask;
      fn(words.data());
    }
  } else {
    util::Rng rng(mode.seed);
    for (std::uint64_t s = 0; s < mode.samples; ++s) {
      for (auto& w : words) w = rng.next_u64();
      if (atom_count % 64 != 0 && atom_count > 0)
        words.back() &= (1ull << (atom_count % 64)) - 1;
      fn(words.data());
    }
  }
}

}  // namespace

std::vector<Diagnostic> check_well_formed(const Ruleset& rs) {
  return WellFormedChecker(rs).run();
}

std::vector<Diagnostic> detect_dead_clauses(const Ruleset& rs, const Mode& mode) {
  std::vector<Diagnostic> diags;
  for (const auto& rule : rs.rules) {
    AtomDomain domain;
    const RuleAtomView view = RuleAtomView::build(rs, rule, domain);
    std::vector<bool> reachable(view.clauses.size(), false);
    std::size_t remaining = view.clauses.size();
    sweep(domain.size(), mode, ("rule " + rule.id).c_str(),
          [&](const std::uint64_t* words) {
            if (remaining == 0) return;
            const auto active = view.active(words);
            if (active && !reachable[*active]) {
              reachable[*active] = true;
              --remaining;
            }
          });
    for (std::size_t i = 0; i < reachable.size(); ++i) {
      if (reachable[i]) continue;
      diags.push_back({Severity::Warning, "DEAD_CLAUSE",
                       i == 0 ? "base clause can never be active"
                              : "hedge " + std::to_string(i) + " can never be active",
                       rule.id, static_cast<int>(i), {}, 0});
    }
  }
  return diags;
}

std::vector<Diagnostic> check_obligation_invariants(const Ruleset& rs, const Mode& mode) {
  // one shared atom domain across the ruleset
  AtomDomain domain;
  std::vector<RuleAtomView> views;
  views.reserve(rs.rules.size());
  for (const auto& rule : rs.rules) views.push_back(RuleAtomView::build(rs, rule, domain));

  // capability registry; invariant programs push capability indices
  std::vector<std::string> caps;
  std::unordered_map<std::string, std::uint32_t> cap_index;
  auto intern_cap = [&](const std::string& name) {
    auto it = cap_index.find(name);
    if (it != cap_index.end()) return it->second;
    const auto idx = static_cast<std::uint32_t>(caps.size());
    cap_index.emplace(name, idx);
    caps.push_back(name);
    return idx;
  };

  struct ClauseAtoms {
    std::vector<std::pair<std::uint32_t, engine::Modifier>> emits;
  };
  std::vector<std::vector<ClauseAtoms>> emits_per_rule(rs.rules.size());
  for (std::size_t r = 0; r < rs.rules.size(); ++r) {
    const auto& rule = rs.rules[r];
    emits_per_rule[r].resize(rule.clause_count());
    for (int clause = 0; clause < rule.clause_count(); ++clause) {
      for (const auto& atom : rule.obligation(clause).atoms) {
        if (atom.capability == syntax::kNoopCapability) continue;
        emits_per_rule[r][clause].emits.emplace_back(intern_cap(atom.capability),
                                                     engine::Modifier::from_atom(atom));
      }
    }
  }

  AtomDomain cap_domain;
  for (const auto& cap : caps) {
    // registration order aligns cap_domain indices with the registry
    cap_domain.resolve(Predicate::enforced(cap));
  }
  std::vector<AtomProgram> invariant_programs;
  invariant_programs.reserve(rs.invariants.size());
  for (const auto& inv : rs.invariants)
    invariant_programs.push_back(AtomProgram::compile(inv.condition, cap_domain));

  struct Finding {
    bool seen = false;
    std::map<std::string, bool> witness;
    std::uint64_t count = 0;
  };
  std::vector<Finding> invariant_findings(rs.invariants.size());
  std::unordered_map<std::uint32_t, Finding> inconsistent;

  const std::size_t cap_words = caps.empty() ? 1 : (caps.size() + 63) / 64;
  std::vector<std::uint64_t> enforced(cap_words);
  std::vector<std::uint32_t> touched;
  std::vector<engine::Modifier> modifier_of(caps.size());
  std::vector<std::uint8_t> cap_seen(caps.size(), 0);

  sweep(domain.size(), mode, "ruleset", [&](const std::uint64_t* words) {
    std::fill(enforced.begin(), enforced.end(), 0);
    touched.clear();
    for (std::size_t r = 0; r < views.size(); ++r) {
      const auto active = views[r].active(words);
      if (!active) continue;
      for (const auto& [cap, mod] : emits_per_rule[r][*active].emits) {
        if (!cap_seen[cap]) {
          cap_seen[cap] = 1;
          modifier_of[cap] = mod;
          touched.push_back(cap);
          enforced[cap >> 6] |= 1ull << (cap & 63);
        } else if (modifier_of[cap] != mod) {
          auto& finding = inconsistent[cap];
          if (!finding.seen) {
            finding.seen = true;
            finding.witness = witness_map(domain, words);
          }
          ++finding.count;
        }
      }
    }
    for (std::size_t i = 0; i < invariant_programs.size(); ++i) {
      if (!invariant_programs[i].eval(enforced.data())) {
        auto& finding = invariant_findings[i];
        if (!finding.seen) {
          finding.seen = true;
          finding.witness = witness_map(domain, words);
        }
        ++finding.count;
      }
    }
    for (const auto cap : touched) cap_seen[cap] = 0;
  });

  std::vector<Diagnostic> diags;
  for (std::size_t i = 0; i < invariant_findings.size(); ++i) {
    const auto& finding = invariant_findings[i];
    if (!finding.seen) continue;
    diags.push_back({Severity::Error, "INVARIANT_VIOLATION",
                     "invariant '" + rs.invariants[i].name + "' violated by " +
                         std::to_string(finding.count) + " assignment(s)",
                     "", -1, finding.witness, finding.count});
  }
  // deterministic order for the capability findings
  std::vector<std::uint32_t> conflict_caps;
  for (const auto& [cap, finding] : inconsistent) conflict_caps.push_back(cap);
  std::sort(conflict_caps.begin(), conflict_caps.end());
  for (const auto cap : conflict_caps) {
    const auto& finding = inconsistent[cap];
    diags.push_back({Severity::Error, "INCONSISTENT_UPDATE",
                     "capability '" + caps[cap] +
                         "' enforced with conflicting temporal constraints in " +
                         std::to_string(finding.count) + " assignment(s)",
                     "", -1, finding.witness, finding.count});
  }
  return diags;
}

engine::ConditionSnapshot random_snapshot(const syntax::VocabularyDecl& vocab, util::Rng& rng,
                                          std::uint64_t timestamp) {
  engine::ConditionSnapshot snap;
  snap.timestamp = timestamp;
  for (const auto& var : vocab.monitored) {
    switch (var.kind) {
      case ValueKind::Boolean:
        snap.values[var.name] = rng.coin();
        break;
      case ValueKind::Integer:
        if (!var.int_min)
          throw AnalysisError("NO_DECLARED_RANGE",
                              "integer variable '" + var.name + "' needs a RANGE");
        snap.values[var.name] = rng.range_i64(*var.int_min, *var.int_max);
        break;
      case ValueKind::Real:
        if (!var.real_min)
          throw AnalysisError("NO_DECLARED_RANGE",
                              "real variable '" + var.name + "' needs a RANGE");
        snap.values[var.name] =
            *var.real_min + rng.unit_real() * (*var.real_max - *var.real_min);
        break;
      case ValueKind::Enum:
        snap.values[var.name] =
            var.enum_members[rng.below(var.enum_members.size())];
        break;
    }
  }
  return snap;
}

SimulationTrace random_simulate(const Ruleset& rs, std::uint64_t steps, std::uint64_t seed) {
  SimulationTrace trace;
  trace.seed = seed;
  util::Rng rng(seed);
  for (std::uint64_t i = 0; i < steps; ++i) {
    SimStep step;
    step.snapshot = random_snapshot(rs.vocabulary, rng, i);
    try {
      step.obligations = engine::oracle_step(rs, step.snapshot);
    } catch (const StepError& e) {
      step.error_code = step_error_code_name(e.code());
      step.error_message = e.what();
    }
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

nlohmann::json SimStep::to_json() const {
  nlohmann::json j{{"snapshot", engine::snapshot_to_json(snapshot)}};
  if (obligations)
    j["obligations"] = engine::obligation_set_to_json(*obligations);
  else
    j["error"] = {{"code", error_code}, {"message", error_message}};
  return j;
}

std::size_t SimulationTrace::violation_count() const {
  std::size_t n = 0;
  for (const auto& s : steps)
    if (!s.obligations) ++n;
  return n;
}

nlohmann::json SimulationTrace::to_json() const {
  nlohmann::json steps_json = nlohmann::json::array();
  for (const auto& s : steps) steps_json.push_back(s.to_json());
  return {{"seed", seed}, {"steps", steps_json}, {"violations", violation_count()}};
}

}  // namespace sleec::analysis
