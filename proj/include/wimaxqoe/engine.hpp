#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <unordered_set>
#include <vector>

#include "wimaxqoe/errors.hpp"
#include "wimaxqoe/sim_time.hpp"

namespace wimaxqoe {

enum class EventKind : std::uint8_t {
  PacketArrival,
  FrameBoundary,
  ControlEpoch,
  RateReset,
  EndOfSimulation,
};

inline constexpr int kBroadcast = -1;

struct Event {
  SimTime fire_at{};
  EventKind kind{EventKind::EndOfSimulation};
  int subject{kBroadcast};  // flow id, or kBroadcast
};

struct EventHandle {
  std::uint64_t seq{};
};

// Single-threaded discrete-event engine. Events fire in (fire_at, insertion)
// order; cancelled events are skipped lazily when they reach the head.
class Engine {
 public:
  using Handler = std::function<void(Engine&, const Event&)>;

  explicit Engine(std::uint64_t seed = 0) : rng_(seed) {}

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  EventHandle schedule(const Event& event) {
    if (event.fire_at < now_) {
      throw SchedulingInPast("event at " + format_seconds(event.fire_at) +
                             " s is before the clock at " + format_seconds(now_) + " s");
    }
    const EventHandle handle{next_seq_++};
    queue_.push(Entry{event, handle.seq});
    live_.insert(handle.seq);
    return handle;
  }

  // Returns false if the event already fired or was cancelled.
  bool cancel(EventHandle handle) {
    if (live_.erase(handle.seq) == 0) return false;
    cancelled_.insert(handle.seq);
    return true;
  }

  // Processes every pending event with fire_at <= until, then parks the clock
  // at `until`. Returns the number of events handled.
  std::size_t run(SimTime until, const Handler& handler) {
    std::size_t processed = 0;
    while (!queue_.empty() && queue_.top().event.fire_at <= until) {
      const Entry entry = queue_.top();
      queue_.pop();
      if (cancelled_.erase(entry.seq) > 0) continue;
      live_.erase(entry.seq);
      now_ = entry.event.fire_at;
      ++processed;
      if (handler) handler(*this, entry.event);
    }
    if (until > now_) now_ = until;
    return processed;
  }

  SimTime now() const noexcept { return now_; }
  std::size_t pending() const noexcept { return live_.size(); }
  std::mt19937_64& rng() noexcept { return rng_; }

 private:
  struct Entry {
    Event event;
    std::uint64_t seq;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const noexcept {
      if (a.event.fire_at != b.event.fire_at) return a.event.fire_at > b.event.fire_at;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  std::unordered_set<std::uint64_t> live_;
  std::unordered_set<std::uint64_t> cancelled_;
  std::uint64_t next_seq_{0};
  SimTime now_{kZeroTime};
  std::mt19937_64 rng_;
};

}  // namespace wimaxqoe
