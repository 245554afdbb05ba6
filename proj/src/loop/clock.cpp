#include "sleec/loop/clock.hpp"

#include <chrono>

namespace sleec::loop {

// ---- VirtualClock ----

std::int64_t VirtualClock::now_ns() {
  std::lock_guard lock(mutex_);
  return now_;
}

TimerId VirtualClock::schedule_at(std::int64_t deadline_ns, std::function<void()> fn) {
  std::lock_guard lock(mutex_);
  const std::uint64_t seq = next_seq_++;
  const TimerId id = seq;
  timers_.emplace(Key{deadline_ns, seq}, std::make_pair(id, std::move(fn)));
  return id;
}

bool VirtualClock::cancel(TimerId id) {
  std::lock_guard lock(mutex_);
  for (auto it = timers_.begin(); it != timers_.end(); ++it) {
    if (it->second.first == id) {
      timers_.erase(it);
      return true;
    }
  }
  return false;
}

void VirtualClock::advance_to(std::int64_t t_ns) {
  for (;;) {
    std::function<void()> fn;
    {
      std::lock_guard lock(mutex_);
      if (t_ns < now_) return;
      auto it = timers_.begin();
      if (it == timers_.end() || it->first.deadline > t_ns) {
        now_ = t_ns;
        return;
      }
      // fire with now() at the exact deadline; never move backwards
      now_ = std::max(now_, it->first.deadline);
      fn = std::move(it->second.second);
      timers_.erase(it);
    }
    fn();
  }
}

// ---- WallClock ----

WallClock::~WallClock() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable()) thread_.join();
}

std::int64_t WallClock::now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

TimerId WallClock::schedule_at(std::int64_t deadline_ns, std::function<void()> fn) {
  std::lock_guard lock(mutex_);
  const std::uint64_t seq = next_seq_++;
  const TimerId id = seq;
  timers_.emplace(Key{deadline_ns, seq}, std::make_pair(id, std::move(fn)));
  if (!thread_.joinable()) thread_ = std::thread([this] { run(); });
  cv_.notify_all();
  return id;
}

bool WallClock::cancel(TimerId id) {
  std::lock_guard lock(mutex_);
  for (auto it = timers_.begin(); it != timers_.end(); ++it) {
    if (it->second.first == id) {
      timers_.erase(it);
      cv_.notify_all();
      return true;
    }
  }
  return false;
}

void WallClock::run() {
  std::unique_lock lock(mutex_);
  for (;;) {
    if (stopping_) return;
    if (timers_.empty()) {
      cv_.wait(lock, [this] { return stopping_ || !timers_.empty(); });
      continue;
    }
    const auto deadline = timers_.begin()->first.deadline;
    if (now_ns() < deadline) {
      cv_.wait_until(lock,
                     std::chrono::steady_clock::time_point(std::chrono::nanoseconds(deadline)));
      continue;
    }
    auto fn = std::move(timers_.begin()->second.second);
    timers_.erase(timers_.begin());
    lock.unlock();
    fn();
    lock.lock();
  }
}

}  // namespace sleec::loop
