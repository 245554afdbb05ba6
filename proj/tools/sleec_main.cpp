// Command-line front end: parse/fmt/analyze/step for ruleset work, serve for
// the model server, loop for the enforcement loop, gen-tests/gen-synthetic
// for fixtures, bench for the correctness and latency suites.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "sleec/analysis/analysis.hpp"
#include "sleec/bench/scenario.hpp"
#include "sleec/bench/suite.hpp"
#include "sleec/engine/json_codec.hpp"
#include "sleec/engine/machine.hpp"
#include "sleec/loop/loop_runner.hpp"
#include "sleec/server/model_server.hpp"
#include "sleec/syntax/formatter.hpp"
#include "sleec/syntax/parser.hpp"

using namespace sleec;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

void print_positioned(const std::string& file, SourcePos pos, const std::string& message) {
  std::cerr << file << ":" << pos.line << ":" << pos.col << ": error: " << message << "\n";
}

void print_diagnostics(const std::string& file, const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) std::cerr << file << ": " << d.to_string() << "\n";
}

/// Parse + report; returns nullopt after printing when the source is bad.
std::optional<syntax::Ruleset> load_ruleset(const std::string& path, bool scenario) {
  const std::string source = scenario ? bench::scenario_source() : read_file(path);
  const std::string label = scenario ? "<scenario>" : path;
  try {
    return syntax::parse_ruleset(source);
  } catch (const LexError& e) {
    print_positioned(label, e.pos(), e.what());
  } catch (const SyntaxError& e) {
    print_positioned(label, e.pos(), e.what());
  } catch (const SemanticError& e) {
    print_diagnostics(label, e.diagnostics());
  }
  return std::nullopt;
}

json diagnostics_json(const std::vector<Diagnostic>& diags) {
  json arr = json::array();
  for (const auto& d : diags) arr.push_back(d.to_json());
  return arr;
}

int cmd_parse(const std::string& file, bool as_json) {
  std::string source;
  try {
    source = read_file(file);
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return kViolation;
  }
  try {
    const auto rs = syntax::parse_ruleset_unchecked(source);
    const auto diags = analysis::check_well_formed(rs);
    if (as_json) {
      std::cout << json{{"file", file},
                        {"rules", rs.rules.size()},
                        {"diagnostics", diagnostics_json(diags)}}
                       .dump(2)
                << "\n";
    } else {
      print_diagnostics(file, diags);
      std::cout << file << ": " << rs.rules.size() << " rule(s), "
                << rs.vocabulary.monitored.size() << " monitored, "
                << rs.invariants.size() << " invariant(s)\n";
    }
    return has_errors(diags) ? kViolation : kOk;
  } catch (const LexError& e) {
    print_positioned(file, e.pos(), e.what());
  } catch (const SyntaxError& e) {
    print_positioned(file, e.pos(), e.what());
  }
  return kViolation;
}

int cmd_fmt(const std::string& file, const std::string& out, bool in_place) {
  const auto rs = load_ruleset(file, false);
  if (!rs) return kViolation;
  const auto text = syntax::format_ruleset(*rs);
  if (in_place)
    write_file(file, text);
  else if (!out.empty())
    write_file(out, text);
  else
    std::cout << text;
  return kOk;
}

int cmd_analyze(const std::string& file, bool scenario, const std::string& mode_name,
                std::uint64_t samples, std::uint64_t seed, std::uint64_t simulate_steps,
                const std::string& json_out) {
  const auto rs = load_ruleset(file, scenario);
  if (!rs) return kViolation;
  const std::string label = scenario ? "<scenario>" : file;

  const auto mode = mode_name == "sampled" ? analysis::Mode::sampled(samples, seed)
                                           : analysis::Mode::exhaustive();
  const auto well_formed = analysis::check_well_formed(*rs);
  print_diagnostics(label, well_formed);

  json report{{"file", label}, {"well_formed", diagnostics_json(well_formed)}};
  bool failed = has_errors(well_formed);

  if (!failed) {
    try {
      const auto dead = analysis::detect_dead_clauses(*rs, mode);
      print_diagnostics(label, dead);
      report["dead_clauses"] = diagnostics_json(dead);
      const auto invariants = analysis::check_obligation_invariants(*rs, mode);
      print_diagnostics(label, invariants);
      report["invariants"] = diagnostics_json(invariants);
      failed = failed || has_errors(dead) || has_errors(invariants);
    } catch (const AnalysisError& e) {
      std::cerr << label << ": error: " << e.code() << ": " << e.what() << "\n";
      report["analysis_error"] = {{"code", e.code()}, {"message", e.what()}};
      failed = true;
    }
    if (simulate_steps > 0) {
      try {
        const auto trace = analysis::random_simulate(*rs, simulate_steps, seed);
        report["simulation"] = trace.to_json();
        std::cout << label << ": simulated " << simulate_steps << " step(s), "
                  << trace.violation_count() << " violation(s)\n";
        failed = failed || trace.violation_count() > 0;
      } catch (const AnalysisError& e) {
        std::cerr << label << ": error: " << e.code() << ": " << e.what() << "\n";
        failed = true;
      }
    }
  }

  if (!json_out.empty()) write_file(json_out, report.dump(2) + "\n");
  std::size_t errors = 0, warnings = 0;
  for (const char* key : {"well_formed", "dead_clauses", "invariants"}) {
    if (!report.contains(key)) continue;
    for (const auto& d : report[key]) {
      if (d["severity"] == "error") ++errors;
      if (d["severity"] == "warning") ++warnings;
    }
  }
  if (errors == 0 && warnings == 0)
    std::cout << label << ": analysis clean\n";
  else
    std::cout << label << ": " << errors << " error(s), " << warnings << " warning(s)\n";
  return failed ? kViolation : kOk;
}

int cmd_step(const std::string& file, bool scenario, const std::string& snapshot_path,
             bool lenient) {
  const auto rs = load_ruleset(file, scenario);
  if (!rs) return kViolation;
  try {
    const auto machine = engine::compile(*rs);
    const auto snap = engine::snapshot_from_json(json::parse(read_file(snapshot_path)));
    const auto set = machine.step(
        snap, lenient ? engine::SnapshotMode::Lenient : engine::SnapshotMode::Strict);
    std::cout << engine::obligation_set_to_json(set).dump() << "\n";
    return kOk;
  } catch (const StepError& e) {
    std::cout << json{{"error",
                       {{"code", step_error_code_name(e.code())},
                        {"message", e.what()},
                        {"detail", e.detail()}}}}
                     .dump()
              << "\n";
    return kViolation;
  } catch (const std::exception& e) {
    std::cerr << "step failed: " << e.what() << "\n";
    return kViolation;
  }
}

int cmd_serve(const std::string& host, int port, const std::string& log_path) {
  std::ofstream log_file;
  server::ModelServer::Options options;
  options.host = host;
  options.port = port;
  if (!log_path.empty()) {
    log_file.open(log_path, std::ios::app);
    if (!log_file) {
      std::cerr << "cannot open log file '" << log_path << "'\n";
      return kViolation;
    }
    options.request_log = &log_file;
  }
  server::ModelServer server(std::move(options));
  const int bound = server.start();
  std::cout << "model server listening on http://" << host << ":" << bound << "\n";
  std::cout << "POST /upload-model, /sessions/{id}/start|stop|step\n";
  for (;;) std::this_thread::sleep_for(std::chrono::hours(1));
}

int cmd_loop(const std::string& config_path, const std::string& probes_path,
             const std::string& records_path) {
  try {
    const auto cfg = loop::LoopConfig::from_json(json::parse(read_file(config_path)));
    if (cfg.model_path.empty()) {
      std::cerr << "config has no 'model' entry\n";
      return kViolation;
    }
    const auto model = read_file(cfg.model_path);
    std::ifstream probes_file;
    std::istream* probes = &std::cin;
    if (!probes_path.empty()) {
      probes_file.open(probes_path);
      if (!probes_file) {
        std::cerr << "cannot open probes file '" << probes_path << "'\n";
        return kViolation;
      }
      probes = &probes_file;
    }
    std::ofstream records_file;
    std::ostream* records = nullptr;
    if (!records_path.empty()) {
      records_file.open(records_path);
      records = &records_file;
    }
    return loop::run_loop_script(model, cfg, *probes, std::cout, records);
  } catch (const loop::LoopError& e) {
    std::cerr << "loop startup failed: " << e.code() << ": " << e.what() << "\n";
    return kViolation;
  } catch (const std::exception& e) {
    std::cerr << "loop failed: " << e.what() << "\n";
    return kViolation;
  }
}

int cmd_gen_tests(const std::string& file, bool scenario, std::size_t cases,
                  std::uint64_t seed, const std::string& out) {
  const auto rs = load_ruleset(file, scenario);
  if (!rs) return kViolation;
  try {
    const auto generated = bench::generate_test_cases(*rs, cases, seed);
    const auto text = bench::test_cases_to_json(generated, seed).dump(2) + "\n";
    if (out.empty())
      std::cout << text;
    else
      write_file(out, text);
    return kOk;
  } catch (const AnalysisError& e) {
    std::cerr << "generation failed: " << e.code() << ": " << e.what() << "\n";
    return kViolation;
  }
}

int cmd_gen_synthetic(std::size_t rules, std::size_t clauses, std::uint64_t seed,
                      const std::string& out) {
  const auto rs = bench::generate_synthetic_ruleset({rules, clauses, seed});
  const auto text = syntax::format_ruleset(rs);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  return kOk;
}

int cmd_bench(const std::string& file, bool scenario, bool grid, std::size_t cases,
              std::uint64_t seed, const std::string& transport_name,
              const std::string& server_url, const std::string& config_path,
              const std::string& out_dir) {
  const auto transport = bench::transport_from_name(transport_name);
  if (!transport) {
    std::cerr << "unknown transport '" << transport_name << "'\n";
    return kUsage;
  }
  bench::SuiteOptions options;
  options.transport = *transport;
  options.server_url = server_url;
  if (!config_path.empty())
    options.config = loop::LoopConfig::from_json(json::parse(read_file(config_path)));
  else if (scenario && *transport == bench::Transport::FullLoop)
    options.config = loop::LoopConfig::from_json(json::parse(bench::scenario_config_source()));

  std::filesystem::create_directories(out_dir);

  if (grid) {
    const auto result = bench::run_synthetic_grid(seed, cases, options);
    write_file(out_dir + "/report.json", bench::grid_report_json(seed, result).dump(2) + "\n");
    std::cout << "synthetic grid: " << result.matches << "/" << result.total
              << " matched across " << result.cells.size() << " rulesets\n";
    for (const auto& fit : result.fits) {
      if (!fit.ok) continue;
      std::cout << "  fit " << bench::fit_model_name(fit.model)
                << ": R^2 = " << fit.r_squared;
      if (fit.model == bench::FitModel::LogLog) std::cout << ", alpha = " << fit.exponent;
      std::cout << "\n";
    }
    std::cout << "report: " << out_dir << "/report.json\n";
    return result.all_matched() ? kOk : kViolation;
  }

  const auto rs = load_ruleset(file, scenario);
  if (!rs) return kViolation;
  const std::string label = scenario ? "scenario" : file;
  const auto generated = bench::generate_test_cases(*rs, cases, seed);
  const auto result = bench::run_suite(*rs, generated, options);

  write_file(out_dir + "/report.json",
             bench::suite_report_json(label, seed, *transport, result).dump(2) + "\n");
  std::ostringstream csv;
  bench::write_latency_csv(csv, result.records);
  write_file(out_dir + "/latency.csv", csv.str());

  std::cout << label << " x " << result.total << " case(s) over "
            << bench::transport_name(*transport) << ": " << result.matches << "/"
            << result.total << " matched\n";
  if (!result.records.empty()) {
    const auto stages = bench::stage_samples(result.records);
    const auto server_stats = bench::compute_stats(stages.server_ms);
    std::cout << "server stage: mean " << server_stats.mean << " ms, p99 "
              << server_stats.p99 << " ms\n";
  }
  std::cout << "reports: " << out_dir << "/report.json, " << out_dir << "/latency.csv\n";
  return result.all_matched() ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SLEEC ruleset toolkit: parser, analyses, rule engine, model server, "
               "enforcement loop, and benchmarks"};
  app.require_subcommand(1);

  std::string file, out, snapshot_path, config_path, probes_path, records_path, log_path;
  std::string json_out, mode_name = "exhaustive", transport_name = "in-process", server_url;
  std::string host = "127.0.0.1";
  bool as_json = false, in_place = false, lenient = false, scenario = false, grid = false;
  std::uint64_t seed = 0, samples = 100000, simulate_steps = 0;
  std::size_t cases = 750, rules = 10, clauses = 2;
  int port = 8470;

  auto* parse_cmd = app.add_subcommand("parse", "parse a ruleset and report diagnostics");
  parse_cmd->add_option("file", file, "ruleset (.sleec)")->required()->check(CLI::ExistingFile);
  parse_cmd->add_flag("--json", as_json, "machine-readable diagnostics");

  auto* fmt_cmd = app.add_subcommand("fmt", "canonically format a ruleset");
  fmt_cmd->add_option("file", file)->required()->check(CLI::ExistingFile);
  fmt_cmd->add_option("-o,--out", out, "write here instead of stdout");
  fmt_cmd->add_flag("-w,--write", in_place, "rewrite the file in place");

  auto* analyze_cmd =
      app.add_subcommand("analyze", "well-formedness, dead clauses, invariant sweep");
  analyze_cmd->add_option("file", file)->check(CLI::ExistingFile);
  analyze_cmd->add_flag("--scenario", scenario, "analyze the built-in scenario");
  analyze_cmd->add_option("--mode", mode_name, "exhaustive|sampled")
      ->check(CLI::IsMember({"exhaustive", "sampled"}));
  analyze_cmd->add_option("--samples", samples, "sample count for sampled mode");
  analyze_cmd->add_option("--seed", seed);
  analyze_cmd->add_option("--simulate", simulate_steps, "also run N random simulation steps");
  analyze_cmd->add_option("--json", json_out, "write a JSON report here");

  auto* step_cmd = app.add_subcommand("step", "one snapshot in, obligations out");
  step_cmd->add_option("file", file)->check(CLI::ExistingFile);
  step_cmd->add_flag("--scenario", scenario);
  step_cmd->add_option("--snapshot", snapshot_path, "snapshot JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  step_cmd->add_flag("--lenient", lenient, "missing booleans default to false");

  auto* serve_cmd = app.add_subcommand("serve", "run the model server");
  serve_cmd->add_option("--host", host);
  serve_cmd->add_option("--port", port, "0 picks a free port");
  serve_cmd->add_option("--log", log_path, "request log (JSON lines)");

  auto* loop_cmd = app.add_subcommand("loop", "run the enforcement loop");
  loop_cmd->add_option("--config", config_path, "config.json")
      ->required()
      ->check(CLI::ExistingFile);
  loop_cmd->add_option("--probes", probes_path, "probe script (JSON lines; stdin otherwise)");
  loop_cmd->add_option("--records", records_path, "write enforcement records here");

  auto* gen_tests_cmd = app.add_subcommand("gen-tests", "generate oracle-grounded test cases");
  gen_tests_cmd->add_option("file", file)->check(CLI::ExistingFile);
  gen_tests_cmd->add_flag("--scenario", scenario);
  gen_tests_cmd->add_option("--cases", cases)->required();
  gen_tests_cmd->add_option("--seed", seed);
  gen_tests_cmd->add_option("-o,--out", out);

  auto* gen_syn_cmd = app.add_subcommand("gen-synthetic", "generate a scalability ruleset");
  gen_syn_cmd->add_option("--rules", rules)->required();
  gen_syn_cmd->add_option("--clauses", clauses, "clauses per rule (base + hedges)")->required();
  gen_syn_cmd->add_option("--seed", seed);
  gen_syn_cmd->add_option("-o,--out", out);

  auto* bench_cmd = app.add_subcommand("bench", "replay cases, compare to the oracle, report");
  bench_cmd->add_option("file", file)->check(CLI::ExistingFile);
  bench_cmd->add_flag("--scenario", scenario, "benchmark the built-in scenario");
  bench_cmd->add_flag("--grid", grid, "run the 110-model synthetic grid");
  bench_cmd->add_option("--cases", cases, "cases per ruleset");
  bench_cmd->add_option("--seed", seed);
  bench_cmd->add_option("--transport", transport_name, "in-process|http|full-loop");
  bench_cmd->add_option("--server", server_url,
                        "use this model server instead of an internal one");
  bench_cmd->add_option("--config", config_path, "loop config for full-loop runs");
  bench_cmd->add_option("--out", out, "report directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (parse_cmd->parsed()) return cmd_parse(file, as_json);
    if (fmt_cmd->parsed()) return cmd_fmt(file, out, in_place);
    if (analyze_cmd->parsed()) {
      if (file.empty() && !scenario) {
        std::cerr << "analyze: need a file or --scenario\n";
        return kUsage;
      }
      return cmd_analyze(file, scenario, mode_name, samples, seed, simulate_steps, json_out);
    }
    if (step_cmd->parsed()) {
      if (file.empty() && !scenario) {
        std::cerr << "step: need a file or --scenario\n";
        return kUsage;
      }
      return cmd_step(file, scenario, snapshot_path, lenient);
    }
    if (serve_cmd->parsed()) return cmd_serve(host, port, log_path);
    if (loop_cmd->parsed()) return cmd_loop(config_path, probes_path, records_path);
    if (gen_tests_cmd->parsed()) {
      if (file.empty() && !scenario) {
        std::cerr << "gen-tests: need a file or --scenario\n";
        return kUsage;
      }
      return cmd_gen_tests(file, scenario, cases, seed, out);
    }
    if (gen_syn_cmd->parsed()) return cmd_gen_synthetic(rules, clauses, seed, out);
    if (bench_cmd->parsed()) {
      if (file.empty() && !scenario && !grid) {
        std::cerr << "bench: need a file, --scenario, or --grid\n";
        return kUsage;
      }
      return cmd_bench(file, scenario, grid, cases, seed, transport_name, server_url,
                       config_path, out.empty() ? "bench-out" : out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
  return kUsage;
}
