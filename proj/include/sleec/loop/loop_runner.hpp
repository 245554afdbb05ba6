#pragma once

#include <istream>
#include <memory>
#include <ostream>
#include <string>

#include "sleec/loop/bus.hpp"
#include "sleec/loop/clock.hpp"
#include "sleec/loop/config.hpp"
#include "sleec/loop/enforcer.hpp"
#include "sleec/loop/executor.hpp"
#include "sleec/loop/mock_system.hpp"
#include "sleec/loop/monitor.hpp"
#include "sleec/loop/record.hpp"
#include "sleec/syntax/ast.hpp"

namespace sleec::loop {

/// Fully wired MAPE-K loop: Monitor -> conditions -> Enforcer -> obligations
/// -> Executor -> tasks -> managed-system mock -> acks, all over the bus.
/// Construction validates the config (every capability mapped), builds the
/// configured clock and transport, and uploads the model (ModelUploader
/// role). upload() hot-swaps the ruleset mid-run; the vocabulary must stay
/// unchanged (rules may be added, removed, or edited).
class EnforcementLoop {
 public:
  struct Options {
    bool with_mock = true;
    std::ostream* records_stream = nullptr;
  };

  EnforcementLoop(std::string model_source, LoopConfig cfg)
      : EnforcementLoop(std::move(model_source), std::move(cfg), Options()) {}
  EnforcementLoop(std::string model_source, LoopConfig cfg, Options options);
  ~EnforcementLoop();

  void upload(const std::string& new_source);

  /// Publishes a probes message (single sample or batch) on the probes
  /// channel.
  void inject(const nlohmann::json& probes_message);

  /// Virtual-mode helper: advances past every temporal constraint in the
  /// ruleset so delayed dispatches flush. No-op on a wall clock.
  void flush_timers();

  Bus& bus() { return bus_; }
  Clock& clock() { return *clock_; }
  VirtualClock* virtual_clock();
  Monitor& monitor() { return *monitor_; }
  Enforcer& enforcer() { return *enforcer_; }
  Executor& executor() { return *executor_; }
  ManagedSystemMock* mock() { return mock_.get(); }
  RecordSink& records() { return sink_; }
  const syntax::Ruleset& ruleset() const { return ruleset_; }
  const LoopConfig& config() const { return cfg_; }

 private:
  LoopConfig cfg_;
  syntax::Ruleset ruleset_;
  Bus bus_;
  std::unique_ptr<Clock> clock_;
  std::unique_ptr<StepTransport> transport_;
  RecordSink sink_;
  std::unique_ptr<Monitor> monitor_;
  std::unique_ptr<Enforcer> enforcer_;
  std::unique_ptr<Executor> executor_;
  std::unique_ptr<ManagedSystemMock> mock_;
};

/// Service main for the CLI: builds the loop from config, replays probe
/// messages from `script` (one JSON object per line; {"advance_ns": n}
/// advances a virtual clock), flushes timers at end of input, and reports a
/// one-line summary. Returns a process exit code.
int run_loop_script(const std::string& model_source, LoopConfig cfg, std::istream& script,
                    std::ostream& out, std::ostream* records_stream);

}  // namespace sleec::loop
