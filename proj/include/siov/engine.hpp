#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "siov/errors.hpp"
#include "siov/event.hpp"
#include "siov/rng.hpp"
#include "siov/time.hpp"

namespace siov {

/// Deterministic discrete-event core: one global clock, a time-ordered queue
/// with FIFO tie-break, and the per-run random streams. Handlers receive a
/// mutable SimEvent so outcome fields (block contents, accept/discard) can be
/// recorded into the log entry.
class Engine {
 public:
  using Handler = std::function<void(SimEvent&)>;

  explicit Engine(std::uint64_t seed) : rng_(seed) {}

  SimTimeUs clock() const { return clock_; }
  RngStream& rng() { return rng_; }

  void on(EventKind kind, Handler h) { handlers_[static_cast<std::size_t>(kind)] = std::move(h); }

  /// Queue an event; its kind is derived from the payload alternative.
  void schedule(SimTimeUs time, EventPayload payload) {
    if (time < clock_) {
      throw PastEventError("event scheduled at t=" + std::to_string(time) +
                           "us before clock t=" + std::to_string(clock_) + "us");
    }
    SimEvent e;
    e.time = time;
    e.kind = static_cast<EventKind>(payload.index());
    e.seq = next_seq_++;
    e.payload = std::move(payload);
    queue_.push(std::move(e));
  }

  /// Process every queued event with time <= end_time, in (time, seq) order.
  /// The clock ends at end_time even if the queue ran dry earlier; events
  /// beyond end_time stay queued. Returns the cumulative log.
  const EventLog& run_until(SimTimeUs end_time) {
    for (std::size_t i = 0; i < handlers_.size(); ++i) {
      if (!handlers_[i]) {
        throw HandlerMissingError(std::string("no handler registered for ") +
                                  to_string(static_cast<EventKind>(i)));
      }
    }
    while (!queue_.empty() && queue_.top().time <= end_time) {
      SimEvent e = queue_.top();
      queue_.pop();
      clock_ = e.time;
      handlers_[static_cast<std::size_t>(e.kind)](e);
      log_.push_back(std::move(e));
    }
    if (end_time > clock_) clock_ = end_time;
    return log_;
  }

  const EventLog& log() const { return log_; }
  bool queue_empty() const { return queue_.empty(); }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  SimTimeUs clock_ = 0;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> queue_;
  std::array<Handler, 5> handlers_{};
  EventLog log_;
  RngStream rng_;
};

}  // namespace siov
