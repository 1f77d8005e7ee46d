#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "siov/time.hpp"

namespace siov {

enum class EventKind : std::size_t {
  MessageAttempt = 0,
  MessageArrival = 1,
  BlockWon = 2,
  BlockReceived = 3,
  MetricTick = 4,
};

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::MessageAttempt: return "MessageAttempt";
    case EventKind::MessageArrival: return "MessageArrival";
    case EventKind::BlockWon: return "BlockWon";
    case EventKind::BlockReceived: return "BlockReceived";
    case EventKind::MetricTick: return "MetricTick";
  }
  return "?";
}

struct MessageAttemptEv {
  std::uint64_t message_id = 0;
  std::uint32_t vehicle = 0;
  std::uint32_t attempt = 0;
};

struct MessageArrivalEv {
  std::uint64_t message_id = 0;
  std::uint32_t vehicle = 0;
  std::uint32_t rsu = 0;
  SimTimeUs generated_at = 0;
  SimTimeUs latency_us = 0;  // arrival minus generation, retransmission rounds included
  std::uint8_t mode = 0;     // connectivity::Mode
};

// block_id/parent/height/tx_count/gas are filled in by the handler (the block
// is packaged at the instant the race resolves, not when the event is queued).
struct BlockWonEv {
  std::uint32_t miner = 0;
  std::uint64_t block_id = 0;
  std::uint64_t parent_id = 0;
  std::uint32_t height = 0;
  std::uint32_t tx_count = 0;
  std::uint64_t gas_used = 0;
};

struct BlockReceivedEv {
  std::uint64_t block_id = 0;
  std::uint32_t node = 0;
  bool accepted = false;  // set by the handler
};

struct MetricTickEv {
  std::uint32_t period = 0;
};

// Variant order must match EventKind: the queue derives the kind from the
// payload index.
using EventPayload =
    std::variant<MessageAttemptEv, MessageArrivalEv, BlockWonEv, BlockReceivedEv, MetricTickEv>;

struct SimEvent {
  SimTimeUs time = 0;
  EventKind kind = EventKind::MessageAttempt;
  std::uint64_t seq = 0;  // tie-break: FIFO at equal times
  EventPayload payload;
};

using EventLog = std::vector<SimEvent>;

namespace detail {
inline void payload_json(const SimEvent& e, std::ostream& os) {
  switch (e.kind) {
    case EventKind::MessageAttempt: {
      const auto& p = std::get<MessageAttemptEv>(e.payload);
      os << "{\"message_id\":" << p.message_id << ",\"vehicle\":" << p.vehicle
         << ",\"attempt\":" << p.attempt << "}";
      break;
    }
    case EventKind::MessageArrival: {
      const auto& p = std::get<MessageArrivalEv>(e.payload);
      os << "{\"message_id\":" << p.message_id << ",\"vehicle\":" << p.vehicle
         << ",\"rsu\":" << p.rsu << ",\"generated_at_us\":" << p.generated_at
         << ",\"latency_us\":" << p.latency_us << ",\"mode\":" << static_cast<int>(p.mode) << "}";
      break;
    }
    case EventKind::BlockWon: {
      const auto& p = std::get<BlockWonEv>(e.payload);
      os << "{\"miner\":" << p.miner << ",\"block_id\":" << p.block_id
         << ",\"parent_id\":" << p.parent_id << ",\"height\":" << p.height
         << ",\"tx_count\":" << p.tx_count << ",\"gas_used\":" << p.gas_used << "}";
      break;
    }
    case EventKind::BlockReceived: {
      const auto& p = std::get<BlockReceivedEv>(e.payload);
      os << "{\"block_id\":" << p.block_id << ",\"node\":" << p.node
         << ",\"accepted\":" << (p.accepted ? "true" : "false") << "}";
      break;
    }
    case EventKind::MetricTick: {
      const auto& p = std::get<MetricTickEv>(e.payload);
      os << "{\"period\":" << p.period << "}";
      break;
    }
  }
}
}  // namespace detail

/// Newline-delimited JSON, one record per processed event.
inline void write_event_log_ndjson(const EventLog& log, std::ostream& os) {
  for (const auto& e : log) {
    os << "{\"time_us\":" << e.time << ",\"kind\":\"" << to_string(e.kind) << "\",\"payload\":";
    detail::payload_json(e, os);
    os << "}\n";
  }
}

}  // namespace siov
