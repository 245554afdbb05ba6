#pragma once

#include <map>
#include <optional>
#include <string>

#include "sleec/engine/value.hpp"
#include "sleec/loop/bus.hpp"
#include "sleec/loop/clock.hpp"
#include "sleec/loop/config.hpp"
#include "sleec/syntax/ast.hpp"

namespace sleec::loop {

struct ProbeSample {
  std::string source;
  engine::Value value;
  std::int64_t timestamp = 0;
};

/// MAPE Monitor: ingests probe samples, owns the condition cache, raises
/// raw values to rule-level conditions (threshold rules and derived
/// predicates), and publishes a conditions message when something actually
/// changed. The cached snapshot is published only once it covers every
/// monitored variable (strict mode); in lenient mode it publishes from the
/// first change.
class Monitor {
 public:
  Monitor(const syntax::Ruleset& rs, const LoopConfig& cfg, Bus& bus, Clock& clock);
  ~Monitor();

  /// Applies one sample to the cache. Returns the condition delta (changed
  /// monitored values plus recomputed derived predicates) or nullopt when
  /// nothing changed. Throws LoopError(UNKNOWN_SOURCE) for a source that is
  /// neither a monitored variable nor in the threshold map.
  std::optional<nlohmann::json> process_probe(const ProbeSample& sample);

  bool cache_complete() const;
  engine::ConditionSnapshot snapshot() const;
  std::uint64_t stale_samples() const { return stale_samples_; }

  /// Bus entry point for a probes message: either one sample object
  /// {"source","value","timestamp"?} or a batch
  /// {"case"?, "samples": [...], "t_probe"?}. A batch updates the cache
  /// atomically and publishes at most one conditions message.
  void on_probe_message(const nlohmann::json& msg);

 private:
  ProbeSample sample_from_json(const nlohmann::json& j) const;
  void publish_conditions(const nlohmann::json& delta, const std::string& case_id,
                          std::int64_t t_probe);
  std::map<std::string, bool> eval_derived() const;

  const syntax::Ruleset& rs_;
  const LoopConfig& cfg_;
  Bus& bus_;
  Clock& clock_;
  Bus::SubscriptionId subscription_;
  engine::ConditionSnapshot cache_;
  std::map<std::string, bool> derived_cache_;
  std::map<std::string, std::int64_t> last_timestamp_;
  std::uint64_t publications_ = 0;
  std::uint64_t stale_samples_ = 0;
};

}  // namespace sleec::loop
