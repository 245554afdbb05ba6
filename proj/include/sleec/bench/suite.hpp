#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sleec/bench/fit.hpp"
#include "sleec/bench/generators.hpp"
#include "sleec/bench/stats.hpp"
#include "sleec/loop/config.hpp"
#include "sleec/loop/record.hpp"
#include "sleec/syntax/ast.hpp"

namespace sleec::bench {

enum class Transport { InProcess, Http, FullLoop };

const char* transport_name(Transport t);
std::optional<Transport> transport_from_name(const std::string& name);

struct SuiteOptions {
  Transport transport = Transport::InProcess;
  /// http/full-loop: base URL of a running model server; empty spins up an
  /// internal one for the suite's lifetime.
  std::string server_url;
  std::string session = "bench";
  /// full-loop only; when absent a trivial one-task-per-capability mapping
  /// is generated.
  std::optional<loop::LoopConfig> config;
};

struct SuiteResult {
  std::size_t matches = 0;
  std::size_t total = 0;
  std::vector<loop::EnforcementRecord> records;

  bool all_matched() const { return matches == total; }
};

/// Replays every case against the chosen transport and compares the
/// enforced obligations (full-loop: also the dispatched task sequences)
/// with the oracle ground truth carried by the cases.
SuiteResult run_suite(const syntax::Ruleset& rs, const std::vector<TestCase>& cases,
                      const SuiteOptions& options = {});

/// Stage samples in milliseconds extracted from records.
struct StageSamples {
  std::vector<double> server_ms;     // server-side step time
  std::vector<double> enforcer_ms;   // t_enforcer_out - t_enforcer_in
  std::vector<double> subsystem_ms;  // t_tasks_dispatched - t_probe
};

StageSamples stage_samples(const std::vector<loop::EnforcementRecord>& records);

struct GridCell {
  std::size_t rules = 0;
  std::size_t clauses_per_rule = 0;
  std::size_t matches = 0;
  std::size_t total = 0;
  OverheadStats server_stats;
};

struct GridResult {
  std::vector<GridCell> cells;
  std::size_t matches = 0;
  std::size_t total = 0;
  std::vector<FitReport> fits;  // mean server ms vs total clause count

  bool all_matched() const { return matches == total; }
};

/// The 110-model scalability protocol: every grid ruleset, `cases_per_model`
/// cases each, plus regression fits of server latency against total clause
/// count.
GridResult run_synthetic_grid(std::uint64_t seed, std::size_t cases_per_model,
                              const SuiteOptions& options = {});

nlohmann::json suite_report_json(const std::string& name, std::uint64_t seed,
                                 Transport transport, const SuiteResult& result);
nlohmann::json grid_report_json(std::uint64_t seed, const GridResult& result);
void write_latency_csv(std::ostream& out, const std::vector<loop::EnforcementRecord>& records);

}  // namespace sleec::bench
