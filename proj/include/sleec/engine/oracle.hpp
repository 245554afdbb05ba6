#pragma once

#include <optional>

#include "sleec/engine/obligation.hpp"
#include "sleec/engine/value.hpp"
#include "sleec/syntax/ast.hpp"

namespace sleec::engine {

/// Reference interpreter: computes the step contract by walking the AST
/// directly, with no compilation step. Serves as ground truth in all
/// differential suites, so it must stay independent of RuleMachine.
ObligationSet oracle_step(const syntax::Ruleset& rs, const ConditionSnapshot& snap,
                          SnapshotMode mode = SnapshotMode::Strict);

/// Clause the oracle considers active for one rule (last clause of the
/// longest satisfied condition prefix); nullopt when the rule is not
/// triggered.
std::optional<int> oracle_active_clause(const syntax::Ruleset& rs, const syntax::Rule& rule,
                                        const ConditionSnapshot& snap,
                                        SnapshotMode mode = SnapshotMode::Strict);

/// Evaluates one condition over a snapshot, resolving derived predicates by
/// name. Exposed for the monitor's condition processing.
bool oracle_eval_condition(const syntax::Ruleset& rs, const syntax::Condition& cond,
                           const ConditionSnapshot& snap,
                           SnapshotMode mode = SnapshotMode::Strict);

}  // namespace sleec::engine
