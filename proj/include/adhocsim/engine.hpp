#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "adhocsim/types.hpp"

namespace adhocsim {

/// Tag describing what a scheduled event does; part of the dispatch trace so
/// that two runs can be compared structurally, not just by final metrics.
enum class EventKind : uint8_t {
  kFrameDelivery,   // end-of-transmission processing
  kMacAccess,       // channel access attempt
  kTimerExpiry,     // protocol timer
  kTrafficTick,     // CBR application send
  kMobilityWaypoint,// leg change bookkeeping
  kPeriodicUpdate,  // proactive routing broadcast timer
};

struct EventHandle {
  uint64_t seq = 0;
  bool valid() const { return seq != 0; }
};

/// Deterministic discrete-event engine. Strictly single-threaded; a whole
/// engine instance may be moved to a worker thread, but events of one engine
/// never run concurrently. Ties at equal fire time break by scheduling
/// sequence number.
class Engine {
 public:
  Engine() = default;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  SimTime now() const { return now_; }

  /// Schedules a callback; throws std::invalid_argument if fire_time < now().
  EventHandle schedule(SimTime fire_time, EventKind kind, NodeId target,
                       std::function<void()> fn);

  /// Cancels a pending event. Idempotent; cancelling an already-dispatched
  /// event has no effect.
  void cancel(EventHandle h);

  /// Dispatches every event with fire_time <= t_end in (fire_time, seq)
  /// order, then advances the clock to t_end. Returns the dispatch count.
  uint64_t run_until(SimTime t_end);

  uint64_t dispatched() const { return dispatched_; }
  uint64_t pending() const { return live_.size(); }

  /// Dispatch tracing: FNV-1a hash over (fire_time, seq, kind) tuples.
  void enable_trace() { tracing_ = true; }
  uint64_t trace_hash() const { return trace_hash_; }

 private:
  struct Key {
    SimTime t;
    uint64_t seq;
    bool operator>(const Key& o) const {
      return t != o.t ? t > o.t : seq > o.seq;
    }
  };
  struct Record {
    EventKind kind;
    NodeId target;
    std::function<void()> fn;
  };

  SimTime now_ = 0.0;
  uint64_t next_seq_ = 1;
  uint64_t dispatched_ = 0;
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> queue_;
  std::unordered_map<uint64_t, Record> live_;

  bool tracing_ = false;
  uint64_t trace_hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace adhocsim
