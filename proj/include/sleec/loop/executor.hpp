#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sleec/engine/obligation.hpp"
#include "sleec/loop/bus.hpp"
#include "sleec/loop/clock.hpp"
#include "sleec/loop/config.hpp"
#include "sleec/loop/record.hpp"

namespace sleec::loop {

/// Concrete executable action derived from one obligation directive.
struct TaskRequest {
  std::string name;
  nlohmann::json params;
  std::string capability;
  engine::Provenance provenance;
  std::string case_id;
  std::int64_t issued_at = 0;
};

/// Expands a directive's capability into its configured task sequence,
/// tagged with provenance. noop expands to nothing. Throws
/// LoopError(UNMAPPED_CAPABILITY) when the config has no mapping.
std::vector<TaskRequest> plan_tasks(const engine::ObligationDirective& directive,
                                    const LoopConfig& cfg);

/// MAPE Execute: receives obligations, plans tasks, and owns all temporal
/// scheduling. After(t) dispatches at now+t. Within(t, fb) dispatches the
/// primary immediately and arms a deadline timer; a fulfillment ack for the
/// primary cancels the timer, otherwise the fallback's tasks dispatch at
/// exactly the deadline. Late acks are logged, never errors.
class Executor {
 public:
  Executor(const LoopConfig& cfg, Bus& bus, Clock& clock, RecordSink& sink);
  ~Executor();

  std::size_t pending_deadlines() const;
  std::uint64_t late_acks() const { return late_acks_; }

 private:
  void on_obligations(const nlohmann::json& msg);
  void on_ack(const nlohmann::json& msg);
  void dispatch(const engine::ObligationDirective& directive, const std::string& case_id,
                std::uint64_t seq, const std::string& fallback_of);

  struct PendingDeadline {
    TimerId timer;
  };

  const LoopConfig& cfg_;
  Bus& bus_;
  Clock& clock_;
  RecordSink& sink_;
  Bus::SubscriptionId obligations_sub_;
  Bus::SubscriptionId acks_sub_;
  mutable std::mutex mutex_;
  std::map<std::string, PendingDeadline> pending_;  // ack key -> armed deadline
  std::uint64_t late_acks_ = 0;
};

}  // namespace sleec::loop
