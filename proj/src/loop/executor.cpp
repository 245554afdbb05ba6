#include "sleec/loop/executor.hpp"

#include "sleec/engine/json_codec.hpp"

namespace sleec::loop {

std::vector<TaskRequest> plan_tasks(const engine::ObligationDirective& directive,
                                    const LoopConfig& cfg) {
  if (directive.capability == syntax::kNoopCapability) return {};
  auto it = cfg.tasks.find(directive.capability);
  if (it == cfg.tasks.end())
    throw LoopError("UNMAPPED_CAPABILITY",
                    "no task mapping for capability '" + directive.capability + "'");
  std::vector<TaskRequest> tasks;
  tasks.reserve(it->second.size());
  for (const auto& spec : it->second) {
    TaskRequest task;
    task.name = spec.name;
    task.params = spec.params;
    task.capability = directive.capability;
    if (!directive.provenance.empty()) task.provenance = directive.provenance.front();
    tasks.push_back(std::move(task));
  }
  return tasks;
}

namespace {

engine::ObligationDirective directive_from_json(const nlohmann::json& d) {
  engine::ObligationDirective directive;
  directive.capability = d.at("capability").get<std::string>();
  directive.modifier = engine::modifier_from_json(d.at("modifier"));
  for (const auto& p : d.at("provenance"))
    directive.provenance.push_back({p.at("rule").get<std::string>(), p.at("clause").get<int>()});
  return directive;
}

std::string ack_key(std::uint64_t seq, const std::string& capability) {
  return std::to_string(seq) + ":" + capability;
}

}  // namespace

Executor::Executor(const LoopConfig& cfg, Bus& bus, Clock& clock, RecordSink& sink)
    : cfg_(cfg), bus_(bus), clock_(clock), sink_(sink) {
  obligations_sub_ = bus_.subscribe(
      cfg_.channels.obligations, [this](const nlohmann::json& msg) { on_obligations(msg); });
  acks_sub_ =
      bus_.subscribe(cfg_.channels.acks, [this](const nlohmann::json& msg) { on_ack(msg); });
}

Executor::~Executor() {
  bus_.unsubscribe(obligations_sub_);
  bus_.unsubscribe(acks_sub_);
}

std::size_t Executor::pending_deadlines() const {
  std::lock_guard lock(mutex_);
  return pending_.size();
}

void Executor::dispatch(const engine::ObligationDirective& directive,
                        const std::string& case_id, std::uint64_t seq,
                        const std::string& fallback_of) {
  auto tasks = plan_tasks(directive, cfg_);
  nlohmann::json task_list = nlohmann::json::array();
  for (const auto& t : tasks) task_list.push_back({{"name", t.name}, {"params", t.params}});
  nlohmann::json provenance = nlohmann::json::array();
  for (const auto& p : directive.provenance)
    provenance.push_back({{"rule", p.rule}, {"clause", p.clause}});
  nlohmann::json msg{
      {"case", case_id},
      {"seq", seq},
      {"capability", directive.capability},
      {"provenance", provenance},
      {"tasks", task_list},
      {"ack_key", ack_key(seq, directive.capability)},
      {"issued_at", clock_.now_ns()},
  };
  if (!fallback_of.empty()) msg["fallback_of"] = fallback_of;
  bus_.publish(cfg_.channels.tasks, msg);
}

void Executor::on_obligations(const nlohmann::json& msg) {
  const std::string case_id = msg.value("case", "");
  const std::uint64_t seq = msg.value("seq", std::uint64_t{0});

  for (const auto& dj : msg.at("directives")) {
    const auto directive = directive_from_json(dj);
    switch (directive.modifier.kind) {
      case engine::Modifier::Kind::None:
        dispatch(directive, case_id, seq, "");
        break;
      case engine::Modifier::Kind::After: {
        const auto deadline = clock_.now_ns() + directive.modifier.duration_ns;
        clock_.schedule_at(deadline, [this, directive, case_id, seq] {
          dispatch(directive, case_id, seq, "");
        });
        break;
      }
      case engine::Modifier::Kind::Within: {
        const std::string key = ack_key(seq, directive.capability);
        const auto deadline = clock_.now_ns() + directive.modifier.duration_ns;
        const TimerId timer =
            clock_.schedule_at(deadline, [this, directive, case_id, seq, key] {
              {
                std::lock_guard lock(mutex_);
                if (!pending_.count(key)) return;  // ack won the race
                pending_.erase(key);
              }
              engine::ObligationDirective fallback;
              fallback.capability = directive.modifier.fallback;
              fallback.modifier = engine::Modifier::none();
              fallback.provenance = directive.provenance;
              dispatch(fallback, case_id, seq, directive.capability);
            });
        {
          // registered before the primary goes out: the fulfillment ack may
          // arrive synchronously on the dispatch path
          std::lock_guard lock(mutex_);
          pending_[key] = {timer};
        }
        dispatch(directive, case_id, seq, "");
        break;
      }
    }
  }

  // the step's record completes once planning and immediate dispatch are done
  EnforcementRecord record;
  record.case_id = case_id;
  record.t_probe = msg.value("t_probe", std::int64_t{0});
  record.t_conditions_published = msg.value("t_conditions_published", std::int64_t{0});
  record.t_enforcer_in = msg.value("t_enforcer_in", std::int64_t{0});
  record.t_server_in = msg.value("t_server_in", std::int64_t{0});
  record.t_server_out = msg.value("t_server_out", std::int64_t{0});
  record.t_enforcer_out = msg.value("t_enforcer_out", std::int64_t{0});
  record.server_us = msg.value("server_us", 0.0);
  record.status = msg.value("status", "critical");
  for (const auto& dj : msg.at("directives"))
    record.capabilities.push_back(dj.at("capability").get<std::string>());
  record.t_tasks_dispatched = clock_.now_ns();
  sink_.add(std::move(record));
}

void Executor::on_ack(const nlohmann::json& msg) {
  const std::string key = msg.value("ack_key", "");
  TimerId timer = 0;
  {
    std::lock_guard lock(mutex_);
    auto it = pending_.find(key);
    if (it == pending_.end()) {
      // ack for a non-Within dispatch or after the deadline fired
      ++late_acks_;
      return;
    }
    timer = it->second.timer;
    pending_.erase(it);
  }
  clock_.cancel(timer);
}

}  // namespace sleec::loop
