#include "sleec/engine/json_codec.hpp"

#include <stdexcept>

namespace sleec::engine {

nlohmann::json snapshot_to_json(const ConditionSnapshot& snap) {
  nlohmann::json values = nlohmann::json::object();
  for (const auto& [name, value] : snap.values) {
    std::visit([&](const auto& v) { values[name] = v; }, value);
  }
  return {{"values", values}, {"timestamp", snap.timestamp}};
}

ConditionSnapshot snapshot_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("values") || !j["values"].is_object())
    throw std::invalid_argument("snapshot must be an object with a 'values' object");
  ConditionSnapshot snap;
  for (const auto& [name, v] : j["values"].items()) {
    if (v.is_boolean())
      snap.values[name] = v.get<bool>();
    else if (v.is_number_integer() || v.is_number_unsigned())
      snap.values[name] = v.get<std::int64_t>();
    else if (v.is_number_float())
      snap.values[name] = v.get<double>();
    else if (v.is_string())
      snap.values[name] = v.get<std::string>();
    else
      throw std::invalid_argument("unsupported value for '" + name + "'");
  }
  if (j.contains("timestamp")) {
    if (!j["timestamp"].is_number())
      throw std::invalid_argument("'timestamp' must be a number");
    snap.timestamp = j["timestamp"].get<std::uint64_t>();
  }
  return snap;
}

nlohmann::json modifier_to_json(const Modifier& m) {
  switch (m.kind) {
    case Modifier::Kind::None:
      return nullptr;
    case Modifier::Kind::After:
      return {{"type", "after"}, {"delay_ns", m.duration_ns}};
    case Modifier::Kind::Within:
      return {{"type", "within"}, {"deadline_ns", m.duration_ns}, {"otherwise", m.fallback}};
  }
  return nullptr;
}

Modifier modifier_from_json(const nlohmann::json& j) {
  Modifier m;
  if (j.is_null()) return m;
  const std::string type = j.at("type").get<std::string>();
  if (type == "after") {
    m.kind = Modifier::Kind::After;
    m.duration_ns = j.at("delay_ns").get<std::int64_t>();
  } else if (type == "within") {
    m.kind = Modifier::Kind::Within;
    m.duration_ns = j.at("deadline_ns").get<std::int64_t>();
    m.fallback = j.at("otherwise").get<std::string>();
  } else {
    throw std::invalid_argument("unknown modifier type '" + type + "'");
  }
  return m;
}

nlohmann::json obligation_set_to_json(const ObligationSet& set) {
  nlohmann::json directives = nlohmann::json::array();
  for (const auto& d : set.directives) {
    nlohmann::json provenance = nlohmann::json::array();
    for (const auto& p : d.provenance)
      provenance.push_back({{"rule", p.rule}, {"clause", p.clause}});
    directives.push_back({{"capability", d.capability},
                          {"modifier", modifier_to_json(d.modifier)},
                          {"provenance", provenance}});
  }
  return {{"directives", directives}, {"status", ethics_status_name(set.status)}};
}

ObligationSet obligation_set_from_json(const nlohmann::json& j) {
  ObligationSet set;
  for (const auto& d : j.at("directives")) {
    ObligationDirective directive;
    directive.capability = d.at("capability").get<std::string>();
    directive.modifier = modifier_from_json(d.at("modifier"));
    for (const auto& p : d.at("provenance"))
      directive.provenance.push_back(
          {p.at("rule").get<std::string>(), p.at("clause").get<int>()});
    set.directives.push_back(std::move(directive));
  }
  const std::string status = j.at("status").get<std::string>();
  set.status = status == "critical" ? EthicsStatus::Critical : EthicsStatus::Respectful;
  return set;
}

}  // namespace sleec::engine
