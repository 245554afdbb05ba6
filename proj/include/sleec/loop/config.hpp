#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sleec/engine/value.hpp"
#include "sleec/syntax/ast.hpp"

namespace sleec::loop {

/// Loop-level failure (bad config, unknown probe source, unmapped
/// capability, unreachable server).
class LoopError : public std::runtime_error {
 public:
  LoopError(std::string code, std::string message)
      : std::runtime_error(std::move(message)), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct TaskSpec {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
};

/// Condition-processor rule turning a raw numeric probe source into a
/// monitored boolean: condition := value(source) <op> threshold.
struct ThresholdRule {
  std::string source;
  std::string condition;
  syntax::RelOp op = syntax::RelOp::Ge;
  double value = 0;
};

/// config.json contents. Schema:
/// {
///   "server":   {"url", "session", "retries", "backoff_ms"},
///   "channels": {"probes","conditions","obligations","tasks","acks"},
///   "clock":    "virtual" | "wall",
///   "snapshot_mode": "strict" | "lenient",
///   "model":    path to the .sleec source uploaded at startup,
///   "tasks":    {capability: [{"name", "params"?}, ...], ...},
///   "thresholds": [{"source","condition","op","value"}, ...]
/// }
/// An empty server url selects the in-process transport.
struct LoopConfig {
  std::string server_url;
  std::string session = "default";
  int retries = 3;
  int backoff_ms = 100;

  struct Channels {
    std::string probes = "/probes";
    std::string conditions = "/conditions";
    std::string obligations = "/obligations";
    std::string tasks = "/tasks";
    std::string acks = "/acks";
  } channels;

  enum class ClockMode { Wall, Virtual };
  ClockMode clock_mode = ClockMode::Virtual;
  engine::SnapshotMode snapshot_mode = engine::SnapshotMode::Strict;

  std::string model_path;
  std::map<std::string, std::vector<TaskSpec>> tasks;
  std::vector<ThresholdRule> thresholds;

  static LoopConfig from_json(const nlohmann::json& j);

  /// Capabilities of the ruleset without a task mapping (noop excepted).
  std::vector<std::string> unmapped_capabilities(const syntax::Ruleset& rs) const;
};

}  // namespace sleec::loop
