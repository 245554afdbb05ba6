#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sleec/engine/obligation.hpp"
#include "sleec/engine/value.hpp"
#include "sleec/syntax/ast.hpp"

namespace sleec::bench {

/// One replayable case: a snapshot and the oracle-computed ground truth.
/// Expected obligations always come from oracle_step, never by hand; a case
/// whose snapshot makes the oracle error records the error code instead.
struct TestCase {
  std::string id;
  engine::ConditionSnapshot snapshot;
  engine::ObligationSet expected;
  std::string expected_error;  // step error code when the oracle throws

  nlohmann::json to_json() const;
};

/// Draws `n` seeded-uniform snapshots over the vocabulary's codomains and
/// computes each case's ground truth with the oracle. Deterministic in
/// (ruleset, n, seed).
std::vector<TestCase> generate_test_cases(const syntax::Ruleset& rs, std::size_t n,
                                          std::uint64_t seed);

nlohmann::json test_cases_to_json(const std::vector<TestCase>& cases, std::uint64_t seed);

/// Parses a case file and re-verifies every expectation against a fresh
/// oracle run; throws std::runtime_error on any mismatch (corrupt file).
std::vector<TestCase> test_cases_from_json(const syntax::Ruleset& rs, const nlohmann::json& j);

/// Shape of one synthetic scalability ruleset: r rules with c clauses each
/// (base + c-1 hedges); clause j of rule k guards on its own fresh monitored
/// boolean and obliges its own fresh capability, so the expected obligation
/// set identifies the active clause uniquely.
struct SyntheticSpec {
  std::size_t rules = 1;
  std::size_t clauses_per_rule = 1;
  std::uint64_t seed = 0;
};

syntax::Ruleset generate_synthetic_ruleset(const SyntheticSpec& spec);

/// The scalability grid: rules in {10,15,...,60} x clauses in {2,4,...,20};
/// 110 combinations.
std::vector<SyntheticSpec> synthetic_grid(std::uint64_t seed);

}  // namespace sleec::bench
