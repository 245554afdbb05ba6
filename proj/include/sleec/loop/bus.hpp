#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace sleec::loop {

/// In-process publish/subscribe bus with named channels. Messages are JSON
/// (wire-shaped, so the transport stays pluggable). Dispatch is synchronous
/// on the publisher's thread, in subscription order; handlers may publish
/// re-entrantly. Subscribing or unsubscribing during a dispatch affects the
/// next publish, not the one in flight.
class Bus {
 public:
  using Handler = std::function<void(const nlohmann::json&)>;
  using SubscriptionId = std::uint64_t;

  SubscriptionId subscribe(const std::string& channel, Handler handler);
  void unsubscribe(SubscriptionId id);
  void publish(const std::string& channel, const nlohmann::json& message);

 private:
  struct Subscriber {
    SubscriptionId id;
    Handler handler;
  };
  mutable std::mutex mutex_;
  std::map<std::string, std::vector<Subscriber>> channels_;
  SubscriptionId next_id_ = 1;
};

}  // namespace sleec::loop
