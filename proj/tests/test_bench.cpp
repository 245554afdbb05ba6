#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "sleec/analysis/analysis.hpp"
#include "sleec/bench/scenario.hpp"
#include "sleec/bench/suite.hpp"
#include "sleec/engine/json_codec.hpp"
#include "sleec/engine/machine.hpp"
#include "sleec/engine/oracle.hpp"
#include "sleec/syntax/parser.hpp"

using namespace sleec;
using namespace sleec::bench;
using nlohmann::json;

TEST_CASE("scenario: nine rules with the documented ids and scopes") {
  const auto rs = load_scenario();
  REQUIRE(rs.rules.size() == 9);
  const std::vector<std::string> ids{"S1", "S1a", "S1b", "S2", "S2a", "S3", "S4", "S5", "S6"};
  for (std::size_t i = 0; i < ids.size(); ++i) CHECK(rs.rules[i].id == ids[i]);
  CHECK(rs.vocabulary.find_scope("StartTrainingTime"));
  CHECK(rs.vocabulary.find_scope("TrainingTime"));
  CHECK(rs.vocabulary.find_scope("Mealtime"));
  CHECK(rs.vocabulary.find_scope("Anytime"));
  REQUIRE(rs.invariants.size() == 1);
  CHECK(rs.invariants[0].name == "inv_1");
}

TEST_CASE("scenario: S5 carries the WITHIN 5 MINUTE OTHERWISE alertNurse atom") {
  const auto rs = load_scenario();
  const auto* s5 = rs.find_rule("S5");
  REQUIRE(s5);
  REQUIRE(s5->hedges.size() == 3);
  const auto& atom = s5->hedges[0].obligation.atoms[0];
  CHECK(atom.capability == "wakeUpUser");
  CHECK(atom.modifier == syntax::ObligationAtom::Modifier::Within);
  CHECK(atom.duration == syntax::TimeDuration{5, syntax::TimeUnit::Minute});
  CHECK(atom.fallback == "alertNurse");
}

TEST_CASE("scenario: S3's hedge is a disjunction of negations") {
  const auto rs = load_scenario();
  const auto* s3 = rs.find_rule("S3");
  REQUIRE(s3);
  REQUIRE(s3->hedges.size() == 1);
  const auto& cond = s3->hedges[0].condition;
  REQUIRE(cond.op == syntax::Condition::Op::Or);
  REQUIRE(cond.children.size() == 2);
  CHECK(cond.children[0].op == syntax::Condition::Op::Not);
  CHECK(cond.children[1].op == syntax::Condition::Op::Not);
}

TEST_CASE("scenario: embedded source matches the shipped fixture file") {
  std::ifstream file(std::string(SLEEC_SOURCE_DIR) + "/fixtures/assistive.sleec");
  REQUIRE(file.good());
  std::stringstream buffer;
  buffer << file.rdbuf();
  CHECK(buffer.str() == scenario_source());

  std::ifstream cfg_file(std::string(SLEEC_SOURCE_DIR) + "/fixtures/assistive.config.json");
  REQUIRE(cfg_file.good());
  std::stringstream cfg_buffer;
  cfg_buffer << cfg_file.rdbuf();
  CHECK(cfg_buffer.str() == scenario_config_source());
}

TEST_CASE("scenario: config maps every capability") {
  const auto cfg = loop::LoopConfig::from_json(json::parse(scenario_config_source()));
  CHECK(cfg.unmapped_capabilities(load_scenario()).empty());
  CHECK(cfg.session == "assistive");
  CHECK(cfg.clock_mode == loop::LoopConfig::ClockMode::Virtual);
}

TEST_CASE("generate_test_cases: deterministic, oracle-grounded") {
  const auto rs = load_scenario();
  const auto a = generate_test_cases(rs, 40, 99);
  const auto b = generate_test_cases(rs, 40, 99);
  REQUIRE(a.size() == 40);
  CHECK(test_cases_to_json(a, 99) == test_cases_to_json(b, 99));
  const auto c = generate_test_cases(rs, 40, 100);
  CHECK(test_cases_to_json(a, 99) != test_cases_to_json(c, 100));
  for (const auto& tc : a) {
    CHECK(tc.expected_error.empty());
    CHECK(engine::oracle_step(rs, tc.snapshot) == tc.expected);
  }
}

TEST_CASE("test case files round-trip and reject tampering") {
  const auto rs = load_scenario();
  const auto cases = generate_test_cases(rs, 10, 7);
  auto j = test_cases_to_json(cases, 7);
  const auto loaded = test_cases_from_json(rs, j);
  REQUIRE(loaded.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(loaded[i].id == cases[i].id);
    CHECK(loaded[i].expected == cases[i].expected);
  }
  // ground-truth integrity: a corrupted expectation must not load
  j["cases"][3]["expected"]["status"] = "respectful";
  j["cases"][3]["expected"]["directives"] = json::array();
  bool tamper_detected = false;
  try {
    test_cases_from_json(rs, j);
  } catch (const std::runtime_error&) {
    tamper_detected = true;
  }
  // case 3 might genuinely be respectful; if so, flip a different field
  if (!tamper_detected) {
    auto j2 = test_cases_to_json(cases, 7);
    j2["cases"][3]["expected"]["status"] = "critical";
    j2["cases"][3]["expected"]["directives"] = json::array({
        {{"capability", "alertNurse"},
         {"modifier", nullptr},
         {"provenance", json::array({{{"rule", "S5"}, {"clause", 3}}})}},
    });
    CHECK_THROWS_AS(test_cases_from_json(rs, j2), std::runtime_error);
  } else {
    CHECK(tamper_detected);
  }
}

TEST_CASE("synthetic: shape follows the spec exactly") {
  const auto big = generate_synthetic_ruleset({60, 20, 0});
  CHECK(big.rules.size() == 60);
  CHECK(big.vocabulary.monitored.size() == 1200);   // one fresh atom per clause
  CHECK(big.vocabulary.capabilities.size() == 1200);
  std::size_t clauses = 0;
  for (const auto& rule : big.rules) {
    CHECK(rule.hedges.size() == 19);
    clauses += rule.clause_count();
    CHECK_FALSE(rule.scope.has_value());
  }
  CHECK(clauses == 1200);

  const auto tiny = generate_synthetic_ruleset({1, 1, 0});
  CHECK(tiny.rules.size() == 1);
  CHECK(tiny.rules[0].hedges.empty());

  CHECK_THROWS_AS(generate_synthetic_ruleset({0, 1, 0}), std::invalid_argument);
}

TEST_CASE("synthetic: the full grid is well-formed and compiles") {
  const auto specs = synthetic_grid(1);
  REQUIRE(specs.size() == 110);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& spec : specs) {
    seen.insert({spec.rules, spec.clauses_per_rule});
    const auto rs = generate_synthetic_ruleset(spec);
    CHECK(analysis::check_well_formed(rs).empty());
    CHECK_NOTHROW(engine::compile(rs));
  }
  CHECK(seen.size() == 110);
  CHECK(seen.count({10, 2}) == 1);
  CHECK(seen.count({60, 20}) == 1);
}

TEST_CASE("run_suite: all transports agree on the scenario") {
  const auto rs = load_scenario();
  const auto cases = generate_test_cases(rs, 25, 4711);

  SuiteOptions in_process;
  const auto a = run_suite(rs, cases, in_process);
  CHECK(a.total == 25);
  CHECK(a.matches == 25);
  REQUIRE(a.records.size() == 25);
  CHECK(a.records[0].matched == std::optional<bool>(true));

  SuiteOptions http;
  http.transport = Transport::Http;
  const auto b = run_suite(rs, cases, http);
  CHECK(b.matches == 25);

  SuiteOptions full;
  full.transport = Transport::FullLoop;
  full.config = loop::LoopConfig::from_json(json::parse(scenario_config_source()));
  const auto c = run_suite(rs, cases, full);
  CHECK(c.matches == 25);

  // transport equivalence on match counts
  CHECK(a.matches == b.matches);
  CHECK(b.matches == c.matches);
}

TEST_CASE("run_suite: detects a wrong expectation") {
  const auto rs = load_scenario();
  auto cases = generate_test_cases(rs, 5, 8);
  cases[2].expected.directives.push_back(
      {"openDoor", engine::Modifier::none(), {{"S1", 0}}});
  cases[2].expected.status = engine::EthicsStatus::Critical;
  const auto result = run_suite(rs, cases, {});
  CHECK(result.matches == 4);
  CHECK_FALSE(result.all_matched());
  CHECK(result.records[2].matched == std::optional<bool>(false));
}

TEST_CASE("run_suite: empty case list") {
  const auto result = run_suite(load_scenario(), {}, {});
  CHECK(result.total == 0);
  CHECK(result.matches == 0);
  CHECK(result.records.empty());
}

TEST_CASE("suite reports and latency csv have the documented shape") {
  const auto rs = load_scenario();
  const auto cases = generate_test_cases(rs, 10, 3);
  const auto result = run_suite(rs, cases, {});
  const auto report = suite_report_json("scenario", 3, Transport::InProcess, result);
  CHECK(report["matches"] == 10);
  CHECK(report["total"] == 10);
  CHECK(report["all_matched"] == true);
  CHECK(report["stats"].contains("server_ms"));
  CHECK(report["stats"]["server_ms"].contains("bowley_skewness"));

  std::ostringstream csv;
  write_latency_csv(csv, result.records);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == loop::EnforcementRecord::csv_header());
  std::size_t rows = 0;
  std::string row;
  while (std::getline(lines, row)) ++rows;
  CHECK(rows == 10);
}

TEST_CASE("small synthetic grid slice matches end to end") {
  // one cell of the scalability protocol, exercised the same way the grid
  // runner does
  const auto rs = generate_synthetic_ruleset({10, 2, 0});
  const auto cases = generate_test_cases(rs, 50, 21);
  const auto result = run_suite(rs, cases, {});
  CHECK(result.matches == 50);
}
