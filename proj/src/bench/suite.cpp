#include "sleec/bench/suite.hpp"

#include <algorithm>
#include <chrono>
#include <map>

#include "sleec/engine/json_codec.hpp"
#include "sleec/engine/machine.hpp"
#include "sleec/loop/enforcer.hpp"
#include "sleec/loop/executor.hpp"
#include "sleec/loop/loop_runner.hpp"
#include "sleec/server/model_server.hpp"
#include "sleec/syntax/formatter.hpp"

namespace sleec::bench {

const char* transport_name(Transport t) {
  switch (t) {
    case Transport::InProcess: return "in-process";
    case Transport::Http: return "http";
    case Transport::FullLoop: return "full-loop";
  }
  return "?";
}

std::optional<Transport> transport_from_name(const std::string& name) {
  if (name == "in-process") return Transport::InProcess;
  if (name == "http") return Transport::Http;
  if (name == "full-loop") return Transport::FullLoop;
  return std::nullopt;
}

namespace {

std::int64_t mono_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

bool matches_expected(const TestCase& tc, const nlohmann::json& obligation_set,
                      const std::string& error_code) {
  if (!tc.expected_error.empty()) return error_code == tc.expected_error;
  if (!error_code.empty()) return false;
  return engine::obligation_set_to_json(tc.expected) == obligation_set;
}

SuiteResult run_in_process(const syntax::Ruleset& rs, const std::vector<TestCase>& cases) {
  SuiteResult result;
  result.total = cases.size();
  const auto machine = engine::compile(rs);
  for (const auto& tc : cases) {
    loop::EnforcementRecord rec;
    rec.case_id = tc.id;
    rec.t_probe = mono_ns();
    rec.t_conditions_published = rec.t_probe;
    rec.t_enforcer_in = mono_ns();
    rec.t_server_in = mono_ns();
    nlohmann::json set_json;
    std::string error_code;
    try {
      const auto set = machine.step(tc.snapshot);
      set_json = engine::obligation_set_to_json(set);
    } catch (const StepError& e) {
      error_code = step_error_code_name(e.code());
    }
    rec.t_server_out = mono_ns();
    rec.server_us = static_cast<double>(rec.t_server_out - rec.t_server_in) / 1000.0;
    rec.t_enforcer_out = mono_ns();
    rec.t_tasks_dispatched = rec.t_enforcer_out;
    if (!error_code.empty()) {
      rec.status = error_code;
    } else {
      rec.status = set_json.value("status", "respectful");
      for (const auto& d : set_json["directives"])
        rec.capabilities.push_back(d.at("capability").get<std::string>());
    }
    rec.matched = matches_expected(tc, set_json, error_code);
    if (*rec.matched) ++result.matches;
    result.records.push_back(std::move(rec));
  }
  return result;
}

SuiteResult run_http(const syntax::Ruleset& rs, const std::vector<TestCase>& cases,
                     const SuiteOptions& options) {
  SuiteResult result;
  result.total = cases.size();

  std::unique_ptr<server::ModelServer> own_server;
  std::string url = options.server_url;
  if (url.empty()) {
    own_server = std::make_unique<server::ModelServer>();
    own_server->start();
    url = own_server->base_url();
  }
  loop::HttpTransport transport(url, options.session);
  transport.upload(syntax::format_ruleset(rs));

  for (const auto& tc : cases) {
    loop::EnforcementRecord rec;
    rec.case_id = tc.id;
    rec.t_probe = mono_ns();
    rec.t_conditions_published = rec.t_probe;
    rec.t_enforcer_in = mono_ns();
    rec.t_server_in = mono_ns();
    nlohmann::json set_json;
    std::string error_code;
    try {
      auto step = transport.step(engine::snapshot_to_json(tc.snapshot));
      set_json = std::move(step.obligation_set);
      rec.server_us = step.server_us;
    } catch (const loop::StepRejected& e) {
      error_code = e.code();
    }
    rec.t_server_out = mono_ns();
    rec.t_enforcer_out = mono_ns();
    rec.t_tasks_dispatched = rec.t_enforcer_out;
    if (!error_code.empty()) {
      rec.status = error_code;
    } else {
      rec.status = set_json.value("status", "respectful");
      for (const auto& d : set_json["directives"])
        rec.capabilities.push_back(d.at("capability").get<std::string>());
    }
    rec.matched = matches_expected(tc, set_json, error_code);
    if (*rec.matched) ++result.matches;
    result.records.push_back(std::move(rec));
  }
  return result;
}

loop::LoopConfig default_loop_config(const syntax::Ruleset& rs, const std::string& server_url,
                                     const std::string& session) {
  loop::LoopConfig cfg;
  cfg.server_url = server_url;
  cfg.session = session;
  cfg.clock_mode = loop::LoopConfig::ClockMode::Virtual;
  for (const auto& cap : rs.vocabulary.capabilities) {
    if (cap.name == syntax::kNoopCapability) continue;
    cfg.tasks[cap.name] = {{"execute_" + cap.name, nlohmann::json::object()}};
  }
  return cfg;
}

/// Expected (task name, capability) multiset for a case, given the mock
/// acks every Within primary before its deadline.
std::vector<std::pair<std::string, std::string>> expected_tasks(
    const TestCase& tc, const loop::LoopConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> expected;
  for (const auto& d : tc.expected.directives) {
    for (const auto& task : loop::plan_tasks(d, cfg))
      expected.emplace_back(task.name, task.capability);
  }
  std::sort(expected.begin(), expected.end());
  return expected;
}

SuiteResult run_full_loop(const syntax::Ruleset& rs, const std::vector<TestCase>& cases,
                          const SuiteOptions& options) {
  SuiteResult result;
  result.total = cases.size();

  std::unique_ptr<server::ModelServer> own_server;
  std::string url = options.server_url;
  if (url.empty()) {
    own_server = std::make_unique<server::ModelServer>();
    own_server->start();
    url = own_server->base_url();
  }

  loop::LoopConfig cfg = options.config
                             ? *options.config
                             : default_loop_config(rs, url, options.session);
  cfg.server_url = url;
  cfg.session = options.session;
  cfg.clock_mode = loop::LoopConfig::ClockMode::Virtual;

  loop::EnforcementLoop loop(syntax::format_ruleset(rs), cfg);

  std::optional<nlohmann::json> previous_values;
  std::optional<bool> previous_matched;

  for (const auto& tc : cases) {
    const auto snapshot_json = engine::snapshot_to_json(tc.snapshot);
    if (previous_values && *previous_values == snapshot_json["values"]) {
      // unchanged snapshot: the loop is change-driven, so no step happens;
      // the oracle is deterministic, so the previous verdict carries over
      loop::EnforcementRecord rec;
      rec.case_id = tc.id;
      rec.status = "unchanged";
      rec.matched = previous_matched.value_or(true);
      if (*rec.matched) ++result.matches;
      result.records.push_back(std::move(rec));
      continue;
    }
    previous_values = snapshot_json["values"];

    loop.mock()->clear_log();
    const std::size_t records_before = loop.records().size();

    nlohmann::json samples = nlohmann::json::array();
    for (const auto& [name, value] : snapshot_json["values"].items())
      samples.push_back({{"source", name},
                         {"value", value},
                         {"timestamp", static_cast<std::int64_t>(tc.snapshot.timestamp)}});
    loop.inject({{"case", tc.id},
                 {"samples", samples},
                 {"t_probe", loop.clock().now_ns()}});
    loop.flush_timers();

    const auto all_records = loop.records().records();
    loop::EnforcementRecord rec;
    bool have_record = false;
    for (std::size_t i = records_before; i < all_records.size(); ++i) {
      if (all_records[i].case_id == tc.id) {
        rec = all_records[i];  // last step of the case decides
        have_record = true;
      }
    }

    bool matched = false;
    if (have_record) {
      std::vector<std::pair<std::string, std::string>> dispatched;
      for (const auto& task : loop.mock()->task_log())
        dispatched.emplace_back(task.name, task.capability);
      std::sort(dispatched.begin(), dispatched.end());
      const bool tasks_match = dispatched == expected_tasks(tc, cfg);
      const bool status_match =
          tc.expected_error.empty()
              ? rec.status == engine::ethics_status_name(tc.expected.status)
              : rec.status == tc.expected_error;
      std::vector<std::string> expected_caps;
      for (const auto& d : tc.expected.directives) expected_caps.push_back(d.capability);
      matched = tasks_match && status_match && rec.capabilities == expected_caps;
    }
    rec.case_id = tc.id;
    rec.matched = matched;
    previous_matched = matched;
    if (matched) ++result.matches;
    result.records.push_back(std::move(rec));
  }
  return result;
}

}  // namespace

SuiteResult run_suite(const syntax::Ruleset& rs, const std::vector<TestCase>& cases,
                      const SuiteOptions& options) {
  switch (options.transport) {
    case Transport::InProcess: return run_in_process(rs, cases);
    case Transport::Http: return run_http(rs, cases, options);
    case Transport::FullLoop: return run_full_loop(rs, cases, options);
  }
  return {};
}

StageSamples stage_samples(const std::vector<loop::EnforcementRecord>& records) {
  StageSamples out;
  for (const auto& r : records) {
    out.server_ms.push_back(r.server_us / 1000.0);
    out.enforcer_ms.push_back(static_cast<double>(r.t_enforcer_out - r.t_enforcer_in) / 1e6);
    out.subsystem_ms.push_back(static_cast<double>(r.t_tasks_dispatched - r.t_probe) / 1e6);
  }
  return out;
}

GridResult run_synthetic_grid(std::uint64_t seed, std::size_t cases_per_model,
                              const SuiteOptions& options) {
  GridResult grid;
  std::vector<DataPoint> points;
  for (const auto& spec : synthetic_grid(seed)) {
    const auto rs = generate_synthetic_ruleset(spec);
    const auto cases = generate_test_cases(
        rs, cases_per_model, seed ^ (spec.rules * 1315423911ull) ^ spec.clauses_per_rule);
    const auto result = run_suite(rs, cases, options);
    GridCell cell;
    cell.rules = spec.rules;
    cell.clauses_per_rule = spec.clauses_per_rule;
    cell.matches = result.matches;
    cell.total = result.total;
    cell.server_stats = compute_stats(stage_samples(result.records).server_ms);
    grid.matches += result.matches;
    grid.total += result.total;
    points.push_back({static_cast<double>(spec.rules * spec.clauses_per_rule),
                      cell.server_stats.mean});
    grid.cells.push_back(std::move(cell));
  }
  grid.fits = fit_models(points);
  return grid;
}

nlohmann::json suite_report_json(const std::string& name, std::uint64_t seed,
                                 Transport transport, const SuiteResult& result) {
  const auto stages = stage_samples(result.records);
  nlohmann::json j{
      {"suite", name},
      {"seed", seed},
      {"transport", transport_name(transport)},
      {"matches", result.matches},
      {"total", result.total},
      {"all_matched", result.all_matched()},
  };
  if (!result.records.empty()) {
    j["stats"] = {{"server_ms", compute_stats(stages.server_ms).to_json()},
                  {"enforcer_ms", compute_stats(stages.enforcer_ms).to_json()},
                  {"subsystem_ms", compute_stats(stages.subsystem_ms).to_json()}};
  }
  return j;
}

nlohmann::json grid_report_json(std::uint64_t seed, const GridResult& result) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : result.cells) {
    cells.push_back({{"rules", c.rules},
                     {"clauses_per_rule", c.clauses_per_rule},
                     {"total_clauses", c.rules * c.clauses_per_rule},
                     {"matches", c.matches},
                     {"total", c.total},
                     {"server_ms", c.server_stats.to_json()}});
  }
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& f : result.fits) fits.push_back(f.to_json());
  return {{"suite", "synthetic-grid"},
          {"seed", seed},
          {"matches", result.matches},
          {"total", result.total},
          {"all_matched", result.all_matched()},
          {"cells", cells},
          {"fits", fits}};
}

void write_latency_csv(std::ostream& out,
                       const std::vector<loop::EnforcementRecord>& records) {
  out << loop::EnforcementRecord::csv_header() << "\n";
  for (const auto& r : records) out << r.csv_row() << "\n";
}

}  // namespace sleec::bench
