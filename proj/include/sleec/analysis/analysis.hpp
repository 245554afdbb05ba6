#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sleec/diagnostics.hpp"
#include "sleec/engine/obligation.hpp"
#include "sleec/engine/value.hpp"
#include "sleec/syntax/ast.hpp"

namespace sleec::util {
class Rng;
}

namespace sleec::analysis {

/// Exhaustive enumeration or seeded sampling for the enumeration-based
/// analyses. Exhaustive mode enumerates all 2^k assignments of the k atoms
/// in play and is capped at kExhaustiveAtomLimit atoms.
struct Mode {
  enum class Kind { Exhaustive, Sampled };
  Kind kind = Kind::Exhaustive;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  static Mode exhaustive() { return {}; }
  static Mode sampled(std::uint64_t n, std::uint64_t seed) {
    return {Kind::Sampled, n, seed};
  }
};

inline constexpr std::size_t kExhaustiveAtomLimit = 24;

/// Name resolution, typing, and structural checks. Errors cover undeclared
/// names, duplicate identifiers, type-mismatched predicates, unknown Within
/// fallbacks; warnings cover unused vocabulary entries and numeric variables
/// without a declared range.
std::vector<Diagnostic> check_well_formed(const syntax::Ruleset& rs);

/// Flags clause i of rule r as DEAD_CLAUSE when no atom assignment makes it
/// the active clause. Per-rule enumeration over that rule's atoms.
/// Throws AnalysisError(ANALYSIS_TOO_LARGE) when a rule exceeds the atom
/// limit in exhaustive mode.
std::vector<Diagnostic> detect_dead_clauses(const syntax::Ruleset& rs,
                                            const Mode& mode = Mode::exhaustive());

/// Sweeps atom assignments over the whole ruleset, runs the abstract step,
/// and reports every obligation invariant that some assignment violates
/// (one INVARIANT_VIOLATION diagnostic per invariant, carrying the first
/// witness and the violation count), plus INCONSISTENT_UPDATE when one
/// capability is enforced with two different temporal constraints at once.
std::vector<Diagnostic> check_obligation_invariants(const syntax::Ruleset& rs,
                                                    const Mode& mode = Mode::exhaustive());

struct SimStep {
  engine::ConditionSnapshot snapshot;
  std::optional<engine::ObligationSet> obligations;  // absent when the step errored
  std::string error_code;                            // STEP_... when errored
  std::string error_message;

  nlohmann::json to_json() const;
};

struct SimulationTrace {
  std::uint64_t seed = 0;
  std::vector<SimStep> steps;

  std::size_t violation_count() const;
  nlohmann::json to_json() const;
};

/// Seeded random simulation: draws every monitored variable uniformly from
/// its codomain (numerics need a declared range), steps the oracle, and
/// records obligations and violations. Identical seed, identical trace.
SimulationTrace random_simulate(const syntax::Ruleset& rs, std::uint64_t steps,
                                std::uint64_t seed);

/// Draws one uniform snapshot from the vocabulary's codomains. Shared by the
/// simulator and the test-case generator. Throws
/// AnalysisError(NO_DECLARED_RANGE) for a numeric variable without a range.
engine::ConditionSnapshot random_snapshot(const syntax::VocabularyDecl& vocab,
                                          sleec::util::Rng& rng, std::uint64_t timestamp);

}  // namespace sleec::analysis
