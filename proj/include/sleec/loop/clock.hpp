#pragma once

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

namespace sleec::loop {

using TimerId = std::uint64_t;

/// Injectable time source with one-shot timers. All temporal behavior in the
/// loop goes through a Clock so MINUTE-scale rules are testable in
/// milliseconds on the virtual implementation.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t now_ns() = 0;
  virtual TimerId schedule_at(std::int64_t deadline_ns, std::function<void()> fn) = 0;
  /// True when the timer existed and had not fired.
  virtual bool cancel(TimerId id) = 0;
};

/// Deterministic clock starting at 0. Timers fire during advance_to(), in
/// deadline order (registration order on ties), with now() set to each
/// timer's exact deadline; callbacks may schedule further timers inside the
/// advanced window.
class VirtualClock final : public Clock {
 public:
  std::int64_t now_ns() override;
  TimerId schedule_at(std::int64_t deadline_ns, std::function<void()> fn) override;
  bool cancel(TimerId id) override;

  void advance_to(std::int64_t t_ns);
  void advance_by(std::int64_t delta_ns) { advance_to(now_ns() + delta_ns); }

 private:
  struct Key {
    std::int64_t deadline;
    std::uint64_t seq;
    bool operator<(const Key& o) const {
      return deadline != o.deadline ? deadline < o.deadline : seq < o.seq;
    }
  };
  std::mutex mutex_;
  std::int64_t now_ = 0;
  std::uint64_t next_seq_ = 1;
  std::map<Key, std::pair<TimerId, std::function<void()>>> timers_;
};

/// Monotonic wall clock; timers run on a lazily started background thread.
class WallClock final : public Clock {
 public:
  WallClock() = default;
  ~WallClock() override;

  std::int64_t now_ns() override;
  TimerId schedule_at(std::int64_t deadline_ns, std::function<void()> fn) override;
  bool cancel(TimerId id) override;

 private:
  void run();

  struct Key {
    std::int64_t deadline;
    std::uint64_t seq;
    bool operator<(const Key& o) const {
      return deadline != o.deadline ? deadline < o.deadline : seq < o.seq;
    }
  };
  std::mutex mutex_;
  std::condition_variable cv_;
  std::map<Key, std::pair<TimerId, std::function<void()>>> timers_;
  std::uint64_t next_seq_ = 1;
  std::thread thread_;
  bool stopping_ = false;
};

}  // namespace sleec::loop
