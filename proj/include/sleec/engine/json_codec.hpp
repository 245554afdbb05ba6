#pragma once

#include <json.hpp>

#include "sleec/engine/obligation.hpp"
#include "sleec/engine/value.hpp"

namespace sleec::engine {

/// Wire encoding shared by the model server, the bus, and the CLI.
/// A snapshot is {"values": {name: value, ...}, "timestamp": n};
/// an obligation set is {"directives": [...], "status": "respectful"|"critical"}
/// where each directive is {"capability", "modifier", "provenance"}.
/// nlohmann::json orders object keys, so dump() output is canonical.

nlohmann::json snapshot_to_json(const ConditionSnapshot& snap);
ConditionSnapshot snapshot_from_json(const nlohmann::json& j);  // throws std::invalid_argument

nlohmann::json modifier_to_json(const Modifier& m);
Modifier modifier_from_json(const nlohmann::json& j);

nlohmann::json obligation_set_to_json(const ObligationSet& set);
ObligationSet obligation_set_from_json(const nlohmann::json& j);

}  // namespace sleec::engine
