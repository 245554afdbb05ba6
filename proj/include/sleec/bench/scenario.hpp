#pragma once

#include <string>

#include "sleec/syntax/ast.hpp"

namespace sleec::bench {

/// Source text of the AssistiveCareRobot ruleset (9 rules S1..S6 plus the
/// open/close-door invariant). Also shipped as fixtures/assistive.sleec.
const std::string& scenario_source();

/// Parses and returns the scenario fixture.
syntax::Ruleset load_scenario();

/// Capability-to-task mapping for the scenario, as config JSON text.
/// Also shipped as fixtures/assistive.config.json.
const std::string& scenario_config_source();

}  // namespace sleec::bench
