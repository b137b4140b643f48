#include "adhocsim/engine.hpp"

#include <bit>
#include <stdexcept>
#include <utility>

namespace adhocsim {

namespace {

void fnv_mix(uint64_t& h, uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
}

}  // namespace

EventHandle Engine::schedule(SimTime fire_time, EventKind kind, NodeId target,
                             std::function<void()> fn) {
  if (fire_time < now_)
    throw std::invalid_argument("Engine::schedule: fire_time is in the past");
  const uint64_t seq = next_seq_++;
  queue_.push(Key{fire_time, seq});
  live_.emplace(seq, Record{kind, target, std::move(fn)});
  return EventHandle{seq};
}

void Engine::cancel(EventHandle h) {
  // The heap keeps a stale key; dispatch skips seqs absent from live_.
  live_.erase(h.seq);
}

uint64_t Engine::run_until(SimTime t_end) {
  uint64_t count = 0;
  while (!queue_.empty()) {
    const Key top = queue_.top();
    if (top.t > t_end) break;
    queue_.pop();
    auto it = live_.find(top.seq);
    if (it == live_.end()) continue;  // cancelled
    Record rec = std::move(it->second);
    live_.erase(it);
    now_ = top.t;
    if (tracing_) {
      fnv_mix(trace_hash_, std::bit_cast<uint64_t>(top.t));
      fnv_mix(trace_hash_, top.seq);
      fnv_mix(trace_hash_, static_cast<uint64_t>(rec.kind));
    }
    rec.fn();
    ++count;
  }
  now_ = t_end;
  dispatched_ += count;
  return count;
}

}  // namespace adhocsim
