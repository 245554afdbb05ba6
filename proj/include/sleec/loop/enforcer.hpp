#pragma once

#include <memory>
#include <mutex>
#include <string>

#include <json.hpp>

#include "sleec/engine/machine.hpp"
#include "sleec/loop/bus.hpp"
#include "sleec/loop/clock.hpp"
#include "sleec/loop/config.hpp"
#include "sleec/loop/record.hpp"

namespace sleec::loop {

/// Step rejected by the model host (bad snapshot, invariant violation, ...).
class StepRejected : public std::runtime_error {
 public:
  StepRejected(std::string code, std::string message, nlohmann::json payload)
      : std::runtime_error(std::move(message)),
        code_(std::move(code)),
        payload_(std::move(payload)) {}
  const std::string& code() const { return code_; }
  const nlohmann::json& payload() const { return payload_; }

 private:
  std::string code_;
  nlohmann::json payload_;
};

/// How the enforcer reaches the model: directly in process or over HTTP.
/// upload() is the ModelUploader role — it hot-swaps the hosted model.
class StepTransport {
 public:
  struct Result {
    nlohmann::json obligation_set;
    double server_us = 0;
  };

  virtual ~StepTransport() = default;
  virtual Result step(const nlohmann::json& snapshot_json) = 0;
  virtual void upload(const std::string& source) = 0;
};

class InProcessTransport final : public StepTransport {
 public:
  InProcessTransport(const std::string& source, engine::SnapshotMode mode);
  Result step(const nlohmann::json& snapshot_json) override;
  void upload(const std::string& source) override;

 private:
  std::mutex mutex_;
  std::shared_ptr<const engine::RuleMachine> machine_;
  engine::SnapshotMode mode_;
};

class HttpTransport final : public StepTransport {
 public:
  /// Does not upload anything yet; call upload() to create the session.
  HttpTransport(std::string base_url, std::string session);
  ~HttpTransport() override;

  Result step(const nlohmann::json& snapshot_json) override;

  /// POST /upload-model?session=...; then starts the session. Throws
  /// LoopError(BAD_MODEL) on a 400, LoopError(SERVER_UNREACHABLE) when the
  /// server cannot be reached.
  void upload(const std::string& source) override;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

/// MAPE Analyze+Plan: turns a conditions message into obligations via the
/// model host, stamps the timing decomposition, and publishes non-empty
/// directive lists on the obligations channel. Respectful steps are
/// recorded but not published.
class Enforcer {
 public:
  Enforcer(const LoopConfig& cfg, Bus& bus, Clock& clock, StepTransport& transport,
           RecordSink& sink);
  ~Enforcer();

  std::uint64_t steps() const { return steps_; }

  void on_conditions(const nlohmann::json& msg);

 private:
  const LoopConfig& cfg_;
  Bus& bus_;
  Clock& clock_;
  StepTransport& transport_;
  RecordSink& sink_;
  Bus::SubscriptionId subscription_;
  std::uint64_t steps_ = 0;
};

}  // namespace sleec::loop
