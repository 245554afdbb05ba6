#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "sleec/bench/scenario.hpp"
#include "sleec/engine/json_codec.hpp"
#include "sleec/engine/machine.hpp"
#include "sleec/engine/oracle.hpp"
#include "sleec/syntax/parser.hpp"
#include "support/gen.hpp"

using namespace sleec;
using namespace sleec::engine;
using sleec::syntax::Condition;
using sleec::syntax::Predicate;

namespace {

/// Scenario snapshot with everything quiet; tests override single values.
ConditionSnapshot scenario_base_snapshot() {
  ConditionSnapshot snap;
  const auto rs = bench::load_scenario();
  for (const auto& var : rs.vocabulary.monitored) {
    switch (var.kind) {
      case syntax::ValueKind::Boolean: snap.values[var.name] = false; break;
      case syntax::ValueKind::Integer: snap.values[var.name] = std::int64_t{20}; break;
      case syntax::ValueKind::Real: snap.values[var.name] = 20.0; break;
      case syntax::ValueKind::Enum: snap.values[var.name] = std::string("FREETIME"); break;
    }
  }
  return snap;
}

std::size_t rule_index(const RuleMachine& m, const std::string& id) {
  for (std::size_t i = 0; i < m.rule_count(); ++i)
    if (m.rule_id(i) == id) return i;
  REQUIRE(false);
  return 0;
}

std::vector<std::string> capabilities_of(const ObligationSet& set) {
  std::vector<std::string> out;
  for (const auto& d : set.directives) out.push_back(d.capability);
  return out;
}

/// Third, deliberately naive evaluation of the guarded-update pattern: the
/// nested-if chain "if c0 and not c1 then 0 else if c0 and c1 and not c2
/// then 1 ...", written directly over clause condition values.
std::optional<int> nested_if_active(const std::vector<bool>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  for (int i = 0; i <= n; ++i) {
    bool prefix = true;
    for (int j = 0; j <= i; ++j) prefix = prefix && c[j];
    const bool defeated = i < n && c[i + 1];
    if (prefix && !defeated) return i;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("compile: scenario compiles; S2 triggers on scope AND NOT exercising") {
  const auto rs = bench::load_scenario();
  const auto m = compile(rs);
  const auto s2 = rule_index(m, "S2");

  auto snap = scenario_base_snapshot();
  snap.values["timeOfDay"] = std::string("TRAININGTIME");
  snap.values["userExercising"] = false;
  CHECK(m.active_clause_index(s2, snap) == std::optional<int>(0));

  snap.values["userExercising"] = true;
  CHECK(m.active_clause_index(s2, snap) == std::nullopt);

  // outside the scope the rule never triggers
  snap.values["userExercising"] = false;
  snap.values["timeOfDay"] = std::string("MEALTIME");
  CHECK(m.active_clause_index(s2, snap) == std::nullopt);
}

TEST_CASE("compile: ruleset with errors is rejected") {
  const auto rs = syntax::parse_ruleset_unchecked(
      "MONITORED a : BOOLEAN\nRULE r IF a THEN flyAway");
  CHECK_THROWS_AS(compile(rs), CompileError);
}

TEST_CASE("compile: derived tooWarm flips at 26") {
  const auto rs = bench::load_scenario();
  const auto m = compile(rs);
  const auto s1 = rule_index(m, "S1");

  auto snap = scenario_base_snapshot();
  snap.values["timeOfDay"] = std::string("STARTTRAININGTIME");
  snap.values["userReady"] = true;
  snap.values["privacyConcern"] = true;
  snap.values["permissionAsked"] = true;

  snap.values["roomTemperature"] = std::int64_t{27};
  CHECK(m.active_clause_index(s1, snap) == std::optional<int>(2));  // askDoorPermission
  snap.values["roomTemperature"] = std::int64_t{25};
  CHECK(m.active_clause_index(s1, snap) == std::optional<int>(1));
}

TEST_CASE("active clause: largest satisfied prefix wins") {
  const auto rs = syntax::parse_ruleset(R"(
MONITORED a : BOOLEAN
MONITORED b : BOOLEAN
MONITORED c : BOOLEAN
CAPABILITY x
CAPABILITY y
CAPABILITY z
RULE r IF a THEN x UNLESS b IN WHICH CASE y UNLESS c IN WHICH CASE z
)");
  const auto m = compile(rs);
  auto snap = ConditionSnapshot{{{"a", true}, {"b", true}, {"c", false}}, 0};
  CHECK(m.active_clause_index(0, snap) == std::optional<int>(1));  // O1 must be fulfilled
  snap.values["c"] = true;
  CHECK(m.active_clause_index(0, snap) == std::optional<int>(2));  // last condition true
  snap.values["a"] = false;
  CHECK(m.active_clause_index(0, snap) == std::nullopt);
  snap = ConditionSnapshot{{{"a", true}, {"b", false}, {"c", true}}, 0};
  CHECK(m.active_clause_index(0, snap) == std::optional<int>(0));  // chain broken at b
}

TEST_CASE("active clause: S2 walks its hedges in priority order") {
  const auto rs = bench::load_scenario();
  const auto m = compile(rs);
  const auto s2 = rule_index(m, "S2");
  auto snap = scenario_base_snapshot();
  snap.values["timeOfDay"] = std::string("TRAININGTIME");

  snap.values["fewerExerciseRepetitions"] = true;
  CHECK(m.active_clause_index(s2, snap) == std::optional<int>(1));  // encourage

  snap.values["userEncouraged"] = true;
  CHECK(m.active_clause_index(s2, snap) == std::optional<int>(2));  // askUserIntent

  snap.values["userPhysicalIssues"] = true;
  CHECK(m.active_clause_index(s2, snap) == std::optional<int>(3));

  // a broken chain falls back to the last satisfied prefix
  snap.values["fewerExerciseRepetitions"] = false;
  CHECK(m.active_clause_index(s2, snap) == std::optional<int>(0));
}

TEST_CASE("step: S2 hedge 3 emits both capabilities, status critical") {
  const auto rs = bench::load_scenario();
  const auto m = compile(rs);
  auto snap = scenario_base_snapshot();
  snap.values["timeOfDay"] = std::string("TRAININGTIME");
  snap.values["fewerExerciseRepetitions"] = true;
  snap.values["userEncouraged"] = true;
  snap.values["userPhysicalIssues"] = true;

  const auto set = m.step(snap);
  CHECK(set.status == EthicsStatus::Critical);
  CHECK(capabilities_of(set) == std::vector<std::string>{"alertNurse", "notifySessionEnd"});
  for (const auto& d : set.directives) {
    CHECK(d.modifier.kind == Modifier::Kind::None);
    REQUIRE(d.provenance.size() == 1);
    CHECK(d.provenance[0] == Provenance{"S2", 3});
  }
}

TEST_CASE("step: quiet snapshot is respectful") {
  const auto rs = bench::load_scenario();
  const auto m = compile(rs);
  const auto set = m.step(scenario_base_snapshot());
  CHECK(set.directives.empty());
  CHECK(set.status == EthicsStatus::Respectful);
}

TEST_CASE("step: AFTER 1 MINUTE survives into the directive") {
  const auto rs = bench::load_scenario();
  const auto m = compile(rs);
  auto snap = scenario_base_snapshot();
  snap.values["timeOfDay"] = std::string("TRAININGTIME");
  const auto set = m.step(snap);
  REQUIRE(set.directives.size() == 1);
  CHECK(set.directives[0].capability == "showNextExercise");
  CHECK(set.directives[0].modifier.kind == Modifier::Kind::After);
  CHECK(set.directives[0].modifier.duration_ns == 60'000'000'000);
}

TEST_CASE("step: noop contributes nothing") {
  const auto rs = syntax::parse_ruleset(
      "MONITORED a : BOOLEAN\nCAPABILITY x\nRULE r IF a THEN noop");
  const auto m = compile(rs);
  const auto set = m.step(ConditionSnapshot{{{"a", true}}, 0});
  CHECK(set.directives.empty());
  CHECK(set.status == EthicsStatus::Respectful);
}

TEST_CASE("step: identical directives merge with combined provenance") {
  const auto rs = syntax::parse_ruleset(R"(
MONITORED a : BOOLEAN
CAPABILITY x
RULE r1 IF a THEN x AFTER 60 SEC
RULE r2 IF a THEN x AFTER 1 MINUTE
)");
  const auto m = compile(rs);
  const auto set = m.step(ConditionSnapshot{{{"a", true}}, 0});
  REQUIRE(set.directives.size() == 1);  // 60 SEC and 1 MINUTE normalize equal
  CHECK(set.directives[0].provenance ==
        std::vector<Provenance>{{"r1", 0}, {"r2", 0}});
}

TEST_CASE("step: conflicting temporal constraints are a hard error") {
  const auto rs = syntax::parse_ruleset(R"(
MONITORED a : BOOLEAN
CAPABILITY x
RULE r1 IF a THEN x AFTER 30 SEC
RULE r2 IF a THEN x AFTER 1 MINUTE
)");
  const auto m = compile(rs);
  try {
    m.step(ConditionSnapshot{{{"a", true}}, 0});
    FAIL("expected StepError");
  } catch (const StepError& e) {
    CHECK(e.code() == StepErrorCode::ConflictingConstraints);
  }
}

TEST_CASE("step: obligation invariant violation names the invariant") {
  const auto rs = syntax::parse_ruleset(R"(
MONITORED a : BOOLEAN
CAPABILITY openDoor
CAPABILITY closeDoor
INVARIANT inv_1 NOT (ENFORCED(openDoor) AND ENFORCED(closeDoor))
RULE r1 IF a THEN openDoor
RULE r2 IF a THEN closeDoor
)");
  const auto m = compile(rs);
  CHECK_NOTHROW(m.step(ConditionSnapshot{{{"a", false}}, 0}));
  try {
    m.step(ConditionSnapshot{{{"a", true}}, 0});
    FAIL("expected StepError");
  } catch (const StepError& e) {
    CHECK(e.code() == StepErrorCode::InvariantViolation);
    CHECK(e.detail().at("invariant") == "inv_1");
  }
}

TEST_CASE("step: strict mode demands complete snapshots; lenient defaults booleans") {
  const auto rs = syntax::parse_ruleset(R"(
MONITORED a : BOOLEAN
MONITORED t : INTEGER RANGE 0 .. 10
CAPABILITY x
RULE r IF a AND t > 5 THEN x
)");
  const auto m = compile(rs);
  ConditionSnapshot missing_bool{{{"t", std::int64_t{7}}}, 0};
  try {
    m.step(missing_bool);
    FAIL("expected StepError");
  } catch (const StepError& e) {
    CHECK(e.code() == StepErrorCode::MissingBinding);
    CHECK(e.detail().at("variable") == "a");
  }
  // lenient: booleans default to false, numerics still required
  const auto set = m.step(missing_bool, SnapshotMode::Lenient);
  CHECK(set.directives.empty());
  ConditionSnapshot missing_int{{{"a", true}}, 0};
  CHECK_THROWS_AS(m.step(missing_int, SnapshotMode::Lenient), StepError);
  // both modes agree with the oracle
  CHECK(oracle_step(rs, missing_bool, SnapshotMode::Lenient) == set);
}

TEST_CASE("step: type mismatches are reported") {
  const auto rs = syntax::parse_ruleset(
      "MONITORED a : BOOLEAN\nCAPABILITY x\nRULE r IF a THEN x");
  const auto m = compile(rs);
  try {
    m.step(ConditionSnapshot{{{"a", std::int64_t{1}}}, 0});
    FAIL("expected StepError");
  } catch (const StepError& e) {
    CHECK(e.code() == StepErrorCode::TypeMismatch);
  }
}

TEST_CASE("oracle: empty ruleset yields an empty respectful set") {
  const syntax::Ruleset rs;
  const auto set = oracle_step(rs, ConditionSnapshot{});
  CHECK(set.directives.empty());
  CHECK(set.status == EthicsStatus::Respectful);
}

TEST_CASE("oracle vs nested-if evaluation on single-rule rulesets") {
  util::Rng rng(99);
  int checked = 0;
  for (int iter = 0; iter < 200; ++iter) {
    auto rs = testgen::random_ruleset(rng);
    rs.rules.resize(1);
    const auto& rule = rs.rules[0];
    for (int s = 0; s < 20; ++s) {
      const auto snap = testgen::random_snapshot_for(rs, rng);
      std::vector<bool> conds;
      bool scope_ok = true;
      if (rule.scope)
        scope_ok = oracle_eval_condition(rs, rs.vocabulary.find_scope(*rule.scope)->condition,
                                         snap);
      conds.push_back(scope_ok && oracle_eval_condition(rs, rule.base_condition, snap));
      for (const auto& hedge : rule.hedges)
        conds.push_back(oracle_eval_condition(rs, hedge.condition, snap));
      CHECK(oracle_active_clause(rs, rule, snap) == nested_if_active(conds));
      ++checked;
    }
  }
  CHECK(checked == 4000);
}

TEST_CASE("differential: compiled step equals oracle step on random rulesets") {
  util::Rng rng(1234);
  int agreements = 0;
  for (int iter = 0; iter < 250; ++iter) {
    const auto rs = testgen::random_ruleset(rng);
    const auto m = compile(rs);
    for (int s = 0; s < 25; ++s) {
      const auto snap = testgen::random_snapshot_for(rs, rng, s);
      ObligationSet from_machine, from_oracle;
      std::string machine_error, oracle_error;
      try {
        from_machine = m.step(snap);
      } catch (const StepError& e) {
        machine_error = step_error_code_name(e.code());
      }
      try {
        from_oracle = oracle_step(rs, snap);
      } catch (const StepError& e) {
        oracle_error = step_error_code_name(e.code());
      }
      REQUIRE(machine_error == oracle_error);
      if (machine_error.empty()) REQUIRE(from_machine == from_oracle);
      ++agreements;
    }
  }
  CHECK(agreements == 250 * 25);
}

TEST_CASE("step: stateless across calls and rule-order independent") {
  util::Rng rng(55);
  for (int iter = 0; iter < 50; ++iter) {
    const auto rs = testgen::random_ruleset(rng);
    const auto m = compile(rs);
    auto shuffled = rs;
    std::shuffle(shuffled.rules.begin(), shuffled.rules.end(), std::mt19937(iter));
    const auto m2 = compile(shuffled);
    for (int s = 0; s < 10; ++s) {
      const auto snap = testgen::random_snapshot_for(rs, rng, s);
      ObligationSet a, b, c;
      std::string ea, eb, ec;
      try { a = m.step(snap); } catch (const StepError& e) { ea = step_error_code_name(e.code()); }
      try { b = m.step(snap); } catch (const StepError& e) { eb = step_error_code_name(e.code()); }
      try { c = m2.step(snap); } catch (const StepError& e) { ec = step_error_code_name(e.code()); }
      CHECK(ea == eb);
      CHECK(ea == ec);
      if (ea.empty()) {
        CHECK(a == b);  // reset between steps: same snapshot, same output
        CHECK(a == c);  // permuting rules never changes the set
      }
    }
  }
}

TEST_CASE("respectful exactly when no non-noop obligation is active") {
  util::Rng rng(77);
  for (int iter = 0; iter < 100; ++iter) {
    const auto rs = testgen::random_ruleset(rng);
    const auto snap = testgen::random_snapshot_for(rs, rng);
    try {
      const auto set = oracle_step(rs, snap);
      bool any_non_noop = false;
      for (const auto& rule : rs.rules) {
        const auto active = oracle_active_clause(rs, rule, snap);
        if (!active) continue;
        for (const auto& atom : rule.obligation(*active).atoms)
          if (atom.capability != syntax::kNoopCapability) any_non_noop = true;
      }
      CHECK((set.status == EthicsStatus::Respectful) == !any_non_noop);
      CHECK(set.directives.empty() == !any_non_noop);
    } catch (const StepError&) {
      // conflicting/invariant-violating draws are exercised elsewhere
    }
  }
}

TEST_CASE("json: snapshot and obligation-set encodings") {
  ConditionSnapshot snap;
  snap.values["flag"] = true;
  snap.values["count"] = std::int64_t{3};
  snap.values["level"] = 1.5;
  snap.values["mode"] = std::string("ALPHA");
  snap.timestamp = 42;
  const auto j = snapshot_to_json(snap);
  CHECK(snapshot_from_json(j) == snap);

  ObligationSet empty;
  CHECK(obligation_set_to_json(empty).dump() == R"({"directives":[],"status":"respectful"})");

  ObligationSet set;
  set.status = EthicsStatus::Critical;
  set.directives.push_back(
      {"wakeUpUser",
       {Modifier::Kind::Within, 300'000'000'000, "alertNurse"},
       {{"S5", 1}}});
  const auto round = obligation_set_from_json(obligation_set_to_json(set));
  CHECK(round == set);

  CHECK_THROWS_AS(snapshot_from_json(nlohmann::json::array()), std::invalid_argument);
  CHECK_THROWS_AS(snapshot_from_json(nlohmann::json{{"values", 3}}), std::invalid_argument);
}
