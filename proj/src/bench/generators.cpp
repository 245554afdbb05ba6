#include "sleec/bench/generators.hpp"

#include <cstdio>
#include <stdexcept>

#include "sleec/analysis/analysis.hpp"
#include "sleec/engine/json_codec.hpp"
#include "sleec/engine/oracle.hpp"
#include "sleec/util/rng.hpp"

namespace sleec::bench {

std::vector<TestCase> generate_test_cases(const syntax::Ruleset& rs, std::size_t n,
                                          std::uint64_t seed) {
  util::Rng rng(seed);
  std::vector<TestCase> cases;
  cases.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    TestCase tc;
    char id[32];
    std::snprintf(id, sizeof(id), "case-%05zu", i);
    tc.id = id;
    tc.snapshot = analysis::random_snapshot(rs.vocabulary, rng, i);
    try {
      tc.expected = engine::oracle_step(rs, tc.snapshot);
    } catch (const StepError& e) {
      tc.expected_error = step_error_code_name(e.code());
    }
    cases.push_back(std::move(tc));
  }
  return cases;
}

nlohmann::json TestCase::to_json() const {
  nlohmann::json j{{"id", id}, {"snapshot", engine::snapshot_to_json(snapshot)}};
  if (expected_error.empty())
    j["expected"] = engine::obligation_set_to_json(expected);
  else
    j["expected_error"] = expected_error;
  return j;
}

nlohmann::json test_cases_to_json(const std::vector<TestCase>& cases, std::uint64_t seed) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cases) arr.push_back(c.to_json());
  return {{"seed", seed}, {"cases", arr}};
}

std::vector<TestCase> test_cases_from_json(const syntax::Ruleset& rs,
                                           const nlohmann::json& j) {
  std::vector<TestCase> cases;
  for (const auto& cj : j.at("cases")) {
    TestCase tc;
    tc.id = cj.at("id").get<std::string>();
    tc.snapshot = engine::snapshot_from_json(cj.at("snapshot"));
    if (cj.contains("expected_error")) tc.expected_error = cj["expected_error"];
    if (cj.contains("expected")) tc.expected = engine::obligation_set_from_json(cj["expected"]);
    // ground-truth integrity: the stored expectation must equal a fresh
    // oracle recomputation
    try {
      const auto fresh = engine::oracle_step(rs, tc.snapshot);
      if (!tc.expected_error.empty() || !(fresh == tc.expected))
        throw std::runtime_error("test case '" + tc.id +
                                 "' does not match a fresh oracle run");
    } catch (const StepError& e) {
      if (tc.expected_error != step_error_code_name(e.code()))
        throw std::runtime_error("test case '" + tc.id +
                                 "' does not match a fresh oracle run");
    }
    cases.push_back(std::move(tc));
  }
  return cases;
}

syntax::Ruleset generate_synthetic_ruleset(const SyntheticSpec& spec) {
  if (spec.rules < 1 || spec.clauses_per_rule < 1)
    throw std::invalid_argument("synthetic spec needs rules >= 1 and clauses >= 1");
  syntax::Ruleset rs;
  for (std::size_t r = 0; r < spec.rules; ++r) {
    syntax::Rule rule;
    rule.id = "R" + std::to_string(r + 1);
    for (std::size_t c = 0; c < spec.clauses_per_rule; ++c) {
      const std::string suffix = std::to_string(r + 1) + "_" + std::to_string(c + 1);
      const std::string atom = "cond_" + suffix;
      const std::string capability = "act_" + suffix;
      syntax::MonitoredVar var;
      var.name = atom;
      var.kind = syntax::ValueKind::Boolean;
      rs.vocabulary.monitored.push_back(var);
      rs.vocabulary.capabilities.push_back({capability, {}});
      syntax::Condition cond =
          syntax::Condition::make_atom(syntax::Predicate::bool_ref(atom));
      syntax::Obligation obl;
      obl.atoms.push_back({capability, syntax::ObligationAtom::Modifier::None, {}, ""});
      if (c == 0) {
        rule.base_condition = std::move(cond);
        rule.base_obligation = std::move(obl);
      } else {
        rule.hedges.push_back({std::move(cond), std::move(obl)});
      }
    }
    rs.rules.push_back(std::move(rule));
  }
  return rs;
}

std::vector<SyntheticSpec> synthetic_grid(std::uint64_t seed) {
  std::vector<SyntheticSpec> specs;
  for (std::size_t rules = 10; rules <= 60; rules += 5)
    for (std::size_t clauses = 2; clauses <= 20; clauses += 2)
      specs.push_back({rules, clauses, seed});
  return specs;
}

}  // namespace sleec::bench
