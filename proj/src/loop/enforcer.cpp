#include "sleec/loop/enforcer.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>

#include "sleec/engine/json_codec.hpp"
#include "sleec/syntax/parser.hpp"

namespace sleec::loop {

// ---- InProcessTransport ----

InProcessTransport::InProcessTransport(const std::string& source, engine::SnapshotMode mode)
    : mode_(mode) {
  upload(source);
}

void InProcessTransport::upload(const std::string& source) {
  auto rs = syntax::parse_ruleset(source);
  auto machine = std::make_shared<const engine::RuleMachine>(engine::compile(rs));
  std::lock_guard lock(mutex_);
  machine_ = std::move(machine);
}

StepTransport::Result InProcessTransport::step(const nlohmann::json& snapshot_json) {
  std::shared_ptr<const engine::RuleMachine> machine;
  {
    std::lock_guard lock(mutex_);
    machine = machine_;
  }
  const auto snap = engine::snapshot_from_json(snapshot_json);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto result = machine->step(snap, mode_);
    Result out;
    out.obligation_set = engine::obligation_set_to_json(result);
    out.server_us =
        std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0)
            .count();
    return out;
  } catch (const StepError& e) {
    throw StepRejected(step_error_code_name(e.code()), e.what(),
                       {{"code", step_error_code_name(e.code())},
                        {"message", e.what()},
                        {"detail", e.detail()}});
  }
}

// ---- HttpTransport ----

class HttpTransport::Impl {
 public:
  Impl(std::string base_url, std::string session)
      : client_(base_url), session_(std::move(session)) {
    client_.set_connection_timeout(5, 0);
    client_.set_read_timeout(30, 0);
  }

  void upload(const std::string& source) {
    auto res = client_.Post("/upload-model?session=" + session_, source, "text/plain");
    if (!res)
      throw LoopError("SERVER_UNREACHABLE", "upload-model: no response from server");
    if (res->status != 200 && res->status != 201)
      throw LoopError("BAD_MODEL", "upload-model rejected: " + res->body);
    auto start = client_.Post("/sessions/" + session_ + "/start", "", "application/json");
    if (!start || start->status != 200)
      throw LoopError("SERVER_UNREACHABLE", "failed to start session '" + session_ + "'");
  }

  StepTransport::Result step(const nlohmann::json& snapshot_json) {
    auto res = client_.Post("/sessions/" + session_ + "/step", snapshot_json.dump(),
                            "application/json");
    if (!res) throw LoopError("SERVER_UNREACHABLE", "step: no response from server");
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error&) {
      throw LoopError("SERVER_UNREACHABLE", "step: unparseable response");
    }
    if (res->status != 200) {
      const std::string code =
          body.contains("error") ? body["error"].value("code", "STEP_REJECTED") : "STEP_REJECTED";
      const std::string message =
          body.contains("error") ? body["error"].value("message", "") : res->body;
      throw StepRejected(code, message, body);
    }
    StepTransport::Result out;
    out.obligation_set = body.at("result");
    out.server_us = body.value("server_us", 0.0);
    return out;
  }

 private:
  httplib::Client client_;
  std::string session_;
};

HttpTransport::HttpTransport(std::string base_url, std::string session)
    : impl_(std::make_unique<Impl>(std::move(base_url), std::move(session))) {}

HttpTransport::~HttpTransport() = default;

void HttpTransport::upload(const std::string& source) { impl_->upload(source); }

StepTransport::Result HttpTransport::step(const nlohmann::json& snapshot_json) {
  return impl_->step(snapshot_json);
}

// ---- Enforcer ----

Enforcer::Enforcer(const LoopConfig& cfg, Bus& bus, Clock& clock, StepTransport& transport,
                   RecordSink& sink)
    : cfg_(cfg), bus_(bus), clock_(clock), transport_(transport), sink_(sink) {
  subscription_ = bus_.subscribe(cfg_.channels.conditions,
                                 [this](const nlohmann::json& msg) { on_conditions(msg); });
}

Enforcer::~Enforcer() { bus_.unsubscribe(subscription_); }

void Enforcer::on_conditions(const nlohmann::json& msg) {
  EnforcementRecord record;
  record.case_id = msg.value("case", "");
  record.t_probe = msg.value("t_probe", clock_.now_ns());
  record.t_conditions_published = msg.value("t_published", record.t_probe);
  record.t_enforcer_in = clock_.now_ns();

  nlohmann::json snapshot_json{{"values", msg.at("values")},
                               {"timestamp", msg.value("timestamp", std::uint64_t{0})}};

  StepTransport::Result result;
  record.t_server_in = clock_.now_ns();
  try {
    int attempt = 0;
    for (;;) {
      try {
        result = transport_.step(snapshot_json);
        break;
      } catch (const LoopError& e) {
        if (e.code() != "SERVER_UNREACHABLE" || ++attempt >= cfg_.retries) throw;
        std::this_thread::sleep_for(std::chrono::milliseconds(cfg_.backoff_ms));
      }
    }
  } catch (const StepRejected& e) {
    record.t_server_out = clock_.now_ns();
    record.t_enforcer_out = record.t_server_out;
    record.t_tasks_dispatched = record.t_server_out;
    record.status = e.code();
    sink_.add(std::move(record));
    return;
  }
  record.t_server_out = clock_.now_ns();
  record.server_us = result.server_us;

  const auto& directives = result.obligation_set.at("directives");
  record.status = result.obligation_set.value("status", "respectful");
  for (const auto& d : directives)
    record.capabilities.push_back(d.at("capability").get<std::string>());
  record.t_enforcer_out = clock_.now_ns();
  const std::uint64_t seq = ++steps_;

  if (directives.empty()) {
    // nothing to enforce: keep the record, do not wake the executor
    record.t_tasks_dispatched = record.t_enforcer_out;
    sink_.add(std::move(record));
    return;
  }

  nlohmann::json out{
      {"case", record.case_id},
      {"seq", seq},
      {"directives", directives},
      {"status", record.status},
      {"server_us", record.server_us},
      {"t_probe", record.t_probe},
      {"t_conditions_published", record.t_conditions_published},
      {"t_enforcer_in", record.t_enforcer_in},
      {"t_server_in", record.t_server_in},
      {"t_server_out", record.t_server_out},
      {"t_enforcer_out", record.t_enforcer_out},
  };
  bus_.publish(cfg_.channels.obligations, out);
}

}  // namespace sleec::loop
