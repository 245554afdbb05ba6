#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "sleec/loop/bus.hpp"
#include "sleec/loop/clock.hpp"
#include "sleec/loop/config.hpp"
#include "sleec/loop/executor.hpp"

namespace sleec::loop {

/// In-process stand-in for the managed autonomous system: consumes task
/// dispatches, logs them, and acknowledges fulfillment per capability
/// policy (immediately by default, after a delay, or never).
class ManagedSystemMock {
 public:
  struct AckPolicy {
    bool ack = true;
    std::int64_t delay_ns = 0;
  };

  ManagedSystemMock(const LoopConfig& cfg, Bus& bus, Clock& clock);
  ~ManagedSystemMock();

  void set_policy(const std::string& capability, AckPolicy policy);

  std::vector<TaskRequest> task_log() const;
  std::size_t task_count() const;
  void clear_log();

 private:
  void on_tasks(const nlohmann::json& msg);

  const LoopConfig& cfg_;
  Bus& bus_;
  Clock& clock_;
  Bus::SubscriptionId subscription_;
  mutable std::mutex mutex_;
  std::vector<TaskRequest> log_;
  std::map<std::string, AckPolicy> policies_;
};

}  // namespace sleec::loop
