#include "sleec/loop/bus.hpp"

namespace sleec::loop {

Bus::SubscriptionId Bus::subscribe(const std::string& channel, Handler handler) {
  std::lock_guard lock(mutex_);
  const SubscriptionId id = next_id_++;
  channels_[channel].push_back({id, std::move(handler)});
  return id;
}

void Bus::unsubscribe(SubscriptionId id) {
  std::lock_guard lock(mutex_);
  for (auto& [name, subs] : channels_) {
    for (auto it = subs.begin(); it != subs.end(); ++it) {
      if (it->id == id) {
        subs.erase(it);
        return;
      }
    }
  }
}

void Bus::publish(const std::string& channel, const nlohmann::json& message) {
  std::vector<Handler> handlers;
  {
    std::lock_guard lock(mutex_);
    auto it = channels_.find(channel);
    if (it == channels_.end()) return;
    handlers.reserve(it->second.size());
    for (const auto& sub : it->second) handlers.push_back(sub.handler);
  }
  for (const auto& handler : handlers) handler(message);
}

}  // namespace sleec::loop
