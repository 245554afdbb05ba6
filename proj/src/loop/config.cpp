#include "sleec/loop/config.hpp"

namespace sleec::loop {

namespace {

syntax::RelOp relop_from_text(const std::string& text) {
  if (text == "=") return syntax::RelOp::Eq;
  if (text == "!=") return syntax::RelOp::Ne;
  if (text == "<") return syntax::RelOp::Lt;
  if (text == "<=") return syntax::RelOp::Le;
  if (text == ">") return syntax::RelOp::Gt;
  if (text == ">=") return syntax::RelOp::Ge;
  throw LoopError("BAD_CONFIG", "unknown relational operator '" + text + "'");
}

}  // namespace

LoopConfig LoopConfig::from_json(const nlohmann::json& j) {
  LoopConfig cfg;
  if (j.contains("server")) {
    const auto& s = j["server"];
    if (s.contains("url")) cfg.server_url = s["url"].get<std::string>();
    if (s.contains("session")) cfg.session = s["session"].get<std::string>();
    if (s.contains("retries")) cfg.retries = s["retries"].get<int>();
    if (s.contains("backoff_ms")) cfg.backoff_ms = s["backoff_ms"].get<int>();
  }
  if (j.contains("channels")) {
    const auto& c = j["channels"];
    if (c.contains("probes")) cfg.channels.probes = c["probes"].get<std::string>();
    if (c.contains("conditions")) cfg.channels.conditions = c["conditions"].get<std::string>();
    if (c.contains("obligations"))
      cfg.channels.obligations = c["obligations"].get<std::string>();
    if (c.contains("tasks")) cfg.channels.tasks = c["tasks"].get<std::string>();
    if (c.contains("acks")) cfg.channels.acks = c["acks"].get<std::string>();
  }
  if (j.contains("clock")) {
    const auto mode = j["clock"].get<std::string>();
    if (mode == "wall")
      cfg.clock_mode = ClockMode::Wall;
    else if (mode == "virtual")
      cfg.clock_mode = ClockMode::Virtual;
    else
      throw LoopError("BAD_CONFIG", "clock must be 'wall' or 'virtual'");
  }
  if (j.contains("snapshot_mode")) {
    const auto mode = j["snapshot_mode"].get<std::string>();
    if (mode == "strict")
      cfg.snapshot_mode = engine::SnapshotMode::Strict;
    else if (mode == "lenient")
      cfg.snapshot_mode = engine::SnapshotMode::Lenient;
    else
      throw LoopError("BAD_CONFIG", "snapshot_mode must be 'strict' or 'lenient'");
  }
  if (j.contains("model")) cfg.model_path = j["model"].get<std::string>();
  if (j.contains("tasks")) {
    for (const auto& [capability, list] : j["tasks"].items()) {
      std::vector<TaskSpec> specs;
      for (const auto& entry : list) {
        TaskSpec spec;
        if (entry.is_string()) {
          spec.name = entry.get<std::string>();
        } else {
          spec.name = entry.at("name").get<std::string>();
          if (entry.contains("params")) spec.params = entry["params"];
        }
        specs.push_back(std::move(spec));
      }
      cfg.tasks[capability] = std::move(specs);
    }
  }
  if (j.contains("thresholds")) {
    for (const auto& entry : j["thresholds"]) {
      ThresholdRule rule;
      rule.source = entry.at("source").get<std::string>();
      rule.condition = entry.at("condition").get<std::string>();
      rule.op = relop_from_text(entry.at("op").get<std::string>());
      rule.value = entry.at("value").get<double>();
      cfg.thresholds.push_back(std::move(rule));
    }
  }
  return cfg;
}

std::vector<std::string> LoopConfig::unmapped_capabilities(const syntax::Ruleset& rs) const {
  std::vector<std::string> missing;
  for (const auto& cap : rs.vocabulary.capabilities) {
    if (cap.name == syntax::kNoopCapability) continue;
    if (!tasks.count(cap.name)) missing.push_back(cap.name);
  }
  return missing;
}

}  // namespace sleec::loop
