#include "sleec/loop/monitor.hpp"

#include "sleec/engine/json_codec.hpp"
#include "sleec/engine/oracle.hpp"

namespace sleec::loop {

namespace {

bool relate(double lhs, syntax::RelOp op, double rhs) {
  switch (op) {
    case syntax::RelOp::Eq: return lhs == rhs;
    case syntax::RelOp::Ne: return lhs != rhs;
    case syntax::RelOp::Lt: return lhs < rhs;
    case syntax::RelOp::Le: return lhs <= rhs;
    case syntax::RelOp::Gt: return lhs > rhs;
    case syntax::RelOp::Ge: return lhs >= rhs;
  }
  return false;
}

nlohmann::json value_to_json(const engine::Value& v) {
  nlohmann::json out;
  std::visit([&](const auto& x) { out = x; }, v);
  return out;
}

double numeric_of(const engine::Value& v, const std::string& source) {
  if (std::holds_alternative<std::int64_t>(v))
    return static_cast<double>(std::get<std::int64_t>(v));
  if (std::holds_alternative<double>(v)) return std::get<double>(v);
  throw LoopError("UNKNOWN_SOURCE",
                  "threshold source '" + source + "' needs a numeric sample");
}

}  // namespace

Monitor::Monitor(const syntax::Ruleset& rs, const LoopConfig& cfg, Bus& bus, Clock& clock)
    : rs_(rs), cfg_(cfg), bus_(bus), clock_(clock) {
  subscription_ = bus_.subscribe(cfg_.channels.probes,
                                 [this](const nlohmann::json& msg) { on_probe_message(msg); });
}

Monitor::~Monitor() { bus_.unsubscribe(subscription_); }

std::map<std::string, bool> Monitor::eval_derived() const {
  std::map<std::string, bool> out;
  for (const auto& def : rs_.vocabulary.derived) {
    try {
      out[def.name] =
          engine::oracle_eval_condition(rs_, def.condition, cache_, engine::SnapshotMode::Strict);
    } catch (const StepError&) {
      // inputs not cached yet; recomputed on a later sample
    }
  }
  return out;
}

std::optional<nlohmann::json> Monitor::process_probe(const ProbeSample& sample) {
  // timestamps are monotone per source; anything older than the last
  // accepted sample is stale and dropped
  auto last = last_timestamp_.find(sample.source);
  if (last != last_timestamp_.end() && sample.timestamp < last->second) {
    ++stale_samples_;
    return std::nullopt;
  }
  last_timestamp_[sample.source] = sample.timestamp;

  std::string condition_name;
  engine::Value condition_value;

  if (rs_.vocabulary.find_monitored(sample.source)) {
    condition_name = sample.source;
    condition_value = sample.value;
  } else {
    const ThresholdRule* rule = nullptr;
    for (const auto& r : cfg_.thresholds) {
      if (r.source == sample.source) {
        rule = &r;
        break;
      }
    }
    if (!rule)
      throw LoopError("UNKNOWN_SOURCE", "probe source '" + sample.source +
                                            "' is neither monitored nor in the threshold map");
    condition_name = rule->condition;
    condition_value = relate(numeric_of(sample.value, sample.source), rule->op, rule->value);
  }

  auto it = cache_.values.find(condition_name);
  const bool changed = it == cache_.values.end() || !(it->second == condition_value);
  if (!changed) return std::nullopt;

  cache_.values[condition_name] = condition_value;
  cache_.timestamp = static_cast<std::uint64_t>(sample.timestamp);

  nlohmann::json delta{{condition_name, value_to_json(condition_value)}};
  auto derived_now = eval_derived();
  for (const auto& [name, value] : derived_now) {
    auto prev = derived_cache_.find(name);
    if (prev == derived_cache_.end() || prev->second != value) delta[name] = value;
  }
  derived_cache_ = std::move(derived_now);
  return delta;
}

bool Monitor::cache_complete() const {
  for (const auto& var : rs_.vocabulary.monitored)
    if (!cache_.values.count(var.name)) return false;
  return true;
}

engine::ConditionSnapshot Monitor::snapshot() const { return cache_; }

ProbeSample Monitor::sample_from_json(const nlohmann::json& j) const {
  ProbeSample sample;
  sample.source = j.at("source").get<std::string>();
  const auto& v = j.at("value");
  if (v.is_boolean())
    sample.value = v.get<bool>();
  else if (v.is_number_integer() || v.is_number_unsigned())
    sample.value = v.get<std::int64_t>();
  else if (v.is_number_float())
    sample.value = v.get<double>();
  else if (v.is_string())
    sample.value = v.get<std::string>();
  else
    throw LoopError("UNKNOWN_SOURCE", "unsupported probe value for '" + sample.source + "'");
  sample.timestamp = j.contains("timestamp") ? j["timestamp"].get<std::int64_t>()
                                             : clock_.now_ns();
  return sample;
}

void Monitor::on_probe_message(const nlohmann::json& msg) {
  std::string case_id = msg.contains("case") ? msg["case"].get<std::string>() : "";
  const std::int64_t t_probe =
      msg.contains("t_probe") ? msg["t_probe"].get<std::int64_t>() : clock_.now_ns();

  nlohmann::json delta = nlohmann::json::object();
  auto merge = [&delta](const nlohmann::json& d) {
    for (const auto& [k, v] : d.items()) delta[k] = v;
  };

  if (msg.contains("samples")) {
    for (const auto& sj : msg["samples"]) {
      if (auto d = process_probe(sample_from_json(sj))) merge(*d);
    }
  } else {
    if (auto d = process_probe(sample_from_json(msg))) merge(*d);
  }

  if (delta.empty()) return;  // publication happens iff the cache changed
  if (cfg_.snapshot_mode == engine::SnapshotMode::Strict && !cache_complete()) return;
  publish_conditions(delta, case_id, t_probe);
}

void Monitor::publish_conditions(const nlohmann::json& delta, const std::string& case_id,
                                 std::int64_t t_probe) {
  ++publications_;
  nlohmann::json msg{
      {"values", engine::snapshot_to_json(cache_)["values"]},
      {"delta", delta},
      {"timestamp", cache_.timestamp},
      {"t_probe", t_probe},
      {"t_published", clock_.now_ns()},
  };
  if (!case_id.empty()) msg["case"] = case_id;
  bus_.publish(cfg_.channels.conditions, msg);
}

}  // namespace sleec::loop
