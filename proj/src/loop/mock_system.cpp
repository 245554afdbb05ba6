#include "sleec/loop/mock_system.hpp"

namespace sleec::loop {

ManagedSystemMock::ManagedSystemMock(const LoopConfig& cfg, Bus& bus, Clock& clock)
    : cfg_(cfg), bus_(bus), clock_(clock) {
  subscription_ = bus_.subscribe(cfg_.channels.tasks,
                                 [this](const nlohmann::json& msg) { on_tasks(msg); });
}

ManagedSystemMock::~ManagedSystemMock() { bus_.unsubscribe(subscription_); }

void ManagedSystemMock::set_policy(const std::string& capability, AckPolicy policy) {
  std::lock_guard lock(mutex_);
  policies_[capability] = policy;
}

std::vector<TaskRequest> ManagedSystemMock::task_log() const {
  std::lock_guard lock(mutex_);
  return log_;
}

std::size_t ManagedSystemMock::task_count() const {
  std::lock_guard lock(mutex_);
  return log_.size();
}

void ManagedSystemMock::clear_log() {
  std::lock_guard lock(mutex_);
  log_.clear();
}

void ManagedSystemMock::on_tasks(const nlohmann::json& msg) {
  const std::string capability = msg.at("capability").get<std::string>();
  {
    std::lock_guard lock(mutex_);
    for (const auto& tj : msg.at("tasks")) {
      TaskRequest task;
      task.name = tj.at("name").get<std::string>();
      task.params = tj.value("params", nlohmann::json::object());
      task.capability = capability;
      if (!msg.at("provenance").empty()) {
        const auto& p = msg["provenance"][0];
        task.provenance = {p.at("rule").get<std::string>(), p.at("clause").get<int>()};
      }
      task.case_id = msg.value("case", "");
      task.issued_at = msg.value("issued_at", std::int64_t{0});
      log_.push_back(std::move(task));
    }
  }

  AckPolicy policy;  // default: acknowledge immediately
  {
    std::lock_guard lock(mutex_);
    auto it = policies_.find(capability);
    if (it != policies_.end()) policy = it->second;
  }
  if (!policy.ack) return;

  nlohmann::json ack{
      {"ack_key", msg.value("ack_key", "")},
      {"capability", capability},
      {"case", msg.value("case", "")},
  };
  if (policy.delay_ns <= 0) {
    ack["timestamp"] = clock_.now_ns();
    bus_.publish(cfg_.channels.acks, ack);
  } else {
    clock_.schedule_at(clock_.now_ns() + policy.delay_ns, [this, ack]() mutable {
      ack["timestamp"] = clock_.now_ns();
      bus_.publish(cfg_.channels.acks, ack);
    });
  }
}

}  // namespace sleec::loop
