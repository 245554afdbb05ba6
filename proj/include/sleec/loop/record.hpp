#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace sleec::loop {

/// Per-step timing decomposition. Timestamps are monotonic-clock
/// nanoseconds (virtual nanoseconds under the virtual clock) and
/// non-decreasing in field order. `matched` is set only when ground truth
/// is known. For a respectful step nothing is dispatched and
/// t_tasks_dispatched equals t_enforcer_out.
struct EnforcementRecord {
  std::string case_id;
  std::int64_t t_probe = 0;
  std::int64_t t_conditions_published = 0;
  std::int64_t t_enforcer_in = 0;
  std::int64_t t_server_in = 0;
  std::int64_t t_server_out = 0;
  std::int64_t t_enforcer_out = 0;
  std::int64_t t_tasks_dispatched = 0;
  double server_us = 0;  // server-side processing time
  std::string status;    // respectful | critical | step error code
  std::vector<std::string> capabilities;
  std::optional<bool> matched;

  nlohmann::json to_json() const;
  static const char* csv_header();
  std::string csv_row() const;
};

/// Collects records; optionally mirrors them to a JSON-lines stream.
class RecordSink {
 public:
  void set_stream(std::ostream* out) { stream_ = out; }
  void add(EnforcementRecord record);
  std::vector<EnforcementRecord> records() const;
  std::size_t size() const;
  void clear();

 private:
  mutable std::mutex mutex_;
  std::vector<EnforcementRecord> records_;
  std::ostream* stream_ = nullptr;
};

}  // namespace sleec::loop
