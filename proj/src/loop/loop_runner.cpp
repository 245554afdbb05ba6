#include "sleec/loop/loop_runner.hpp"

#include <sstream>

#include "sleec/syntax/parser.hpp"

namespace sleec::loop {

EnforcementLoop::EnforcementLoop(std::string model_source, LoopConfig cfg, Options options)
    : cfg_(std::move(cfg)) {
  ruleset_ = syntax::parse_ruleset(model_source);

  const auto missing = cfg_.unmapped_capabilities(ruleset_);
  if (!missing.empty()) {
    std::ostringstream os;
    os << "config has no task mapping for:";
    for (const auto& cap : missing) os << " " << cap;
    throw LoopError("UNMAPPED_CAPABILITY", os.str());
  }

  if (cfg_.clock_mode == LoopConfig::ClockMode::Virtual)
    clock_ = std::make_unique<VirtualClock>();
  else
    clock_ = std::make_unique<WallClock>();

  if (cfg_.server_url.empty()) {
    transport_ = std::make_unique<InProcessTransport>(model_source, cfg_.snapshot_mode);
  } else {
    auto http = std::make_unique<HttpTransport>(cfg_.server_url, cfg_.session);
    http->upload(model_source);
    transport_ = std::move(http);
  }

  sink_.set_stream(options.records_stream);
  monitor_ = std::make_unique<Monitor>(ruleset_, cfg_, bus_, *clock_);
  enforcer_ = std::make_unique<Enforcer>(cfg_, bus_, *clock_, *transport_, sink_);
  executor_ = std::make_unique<Executor>(cfg_, bus_, *clock_, sink_);
  if (options.with_mock) mock_ = std::make_unique<ManagedSystemMock>(cfg_, bus_, *clock_);
}

EnforcementLoop::~EnforcementLoop() = default;

void EnforcementLoop::upload(const std::string& new_source) {
  auto rs = syntax::parse_ruleset(new_source);
  const auto missing = cfg_.unmapped_capabilities(rs);
  if (!missing.empty())
    throw LoopError("UNMAPPED_CAPABILITY",
                    "uploaded model has capabilities without task mappings");
  transport_->upload(new_source);
  ruleset_ = std::move(rs);  // monitor reads vocabulary through this object
}

void EnforcementLoop::inject(const nlohmann::json& probes_message) {
  bus_.publish(cfg_.channels.probes, probes_message);
}

VirtualClock* EnforcementLoop::virtual_clock() {
  return dynamic_cast<VirtualClock*>(clock_.get());
}

void EnforcementLoop::flush_timers() {
  auto* vc = virtual_clock();
  if (!vc) return;
  std::int64_t horizon = 0;
  for (const auto& rule : ruleset_.rules) {
    for (int clause = 0; clause < rule.clause_count(); ++clause) {
      for (const auto& atom : rule.obligation(clause).atoms) {
        if (atom.modifier != syntax::ObligationAtom::Modifier::None)
          horizon = std::max(horizon, atom.duration.to_nanos());
      }
    }
  }
  vc->advance_by(horizon + 1'000'000'000);
}

int run_loop_script(const std::string& model_source, LoopConfig cfg, std::istream& script,
                    std::ostream& out, std::ostream* records_stream) {
  EnforcementLoop::Options options;
  options.records_stream = records_stream;
  EnforcementLoop loop(model_source, std::move(cfg), options);

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(script, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    nlohmann::json msg;
    try {
      msg = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      out << "probe script line " << line_no << ": " << e.what() << "\n";
      return 1;
    }
    if (msg.contains("advance_ns")) {
      if (auto* vc = loop.virtual_clock())
        vc->advance_by(msg["advance_ns"].get<std::int64_t>());
      continue;
    }
    loop.inject(msg);
  }
  loop.flush_timers();

  const auto records = loop.records().records();
  std::size_t critical = 0;
  for (const auto& r : records)
    if (r.status == "critical") ++critical;
  out << "loop done: " << records.size() << " step(s), " << critical << " critical, "
      << (loop.mock() ? loop.mock()->task_count() : 0) << " task(s) dispatched\n";
  return 0;
}

}  // namespace sleec::loop
