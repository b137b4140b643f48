#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "adhocsim/frame.hpp"
#include "adhocsim/types.hpp"

namespace adhocsim {

enum class DropReason : uint8_t {
  kNoRoute,           // table-driven forwarding had no usable next hop
  kDiscoveryFailed,   // route discovery exhausted its retries
  kBufferOverflow,    // send-buffer displaced the oldest packet
  kBufferExpired,     // send-buffer entry outlived its deadline
  kMacQueueOverflow,  // interface queue drop-tail
  kRetryExhausted,    // link-layer retries spent, no repair/salvage possible
  kSalvageLimit,      // DSR salvage counter hit its cap
  kHopLimit,          // forwarding safety cap
  kReasonCount
};

struct LatencyRecord {
  uint64_t packet_id;
  NodeId origin;
  NodeId final_dst;
  SimTime sent_at;
  SimTime delivered_at;
  int hops;
};

/// Counters and per-packet records behind the metric pipeline. A packet
/// participates iff its application send time falls at or after the warm-up
/// boundary; control transmissions count by wall-clock the same way.
class MetricsLedger {
 public:
  explicit MetricsLedger(SimTime warmup = 0.0) : warmup_(warmup) {}

  bool counted(const DataPacket& p) const { return p.app_sent >= warmup_; }

  void on_sent(const DataPacket& p);
  /// Records a delivery; duplicate packet ids are suppressed, not re-counted.
  void on_delivered(const DataPacket& p, SimTime now);
  void on_dropped(const DataPacket& p, DropReason r);
  void on_control_tx(SimTime now);

  uint64_t data_sent() const { return data_sent_; }
  uint64_t data_delivered() const { return data_delivered_; }
  uint64_t data_dropped() const { return data_dropped_; }
  uint64_t delivered_bytes() const { return delivered_bytes_; }
  uint64_t control_tx() const { return control_tx_; }
  uint64_t drops(DropReason r) const { return drops_[static_cast<size_t>(r)]; }
  uint64_t in_flight_at_end() const {
    return data_sent_ - data_delivered_ - data_dropped_;
  }
  SimTime warmup() const { return warmup_; }

  /// delivered_bytes * 8 / duration; duration must be positive.
  double throughput_bps(double duration) const;

  /// Mean end-to-end delay over delivered packets, in milliseconds;
  /// absent when nothing was delivered.
  std::optional<double> e2ed_ms() const;

  /// Routing-control transmissions per delivered data packet;
  /// absent when nothing was delivered.
  std::optional<double> nrl() const;

  /// data_delivered / data_sent; absent when nothing was sent.
  std::optional<double> pdr() const;

  const std::vector<LatencyRecord>& latency_records() const { return latencies_; }

 private:
  SimTime warmup_;
  uint64_t data_sent_ = 0;
  uint64_t data_delivered_ = 0;
  uint64_t data_dropped_ = 0;
  uint64_t delivered_bytes_ = 0;
  uint64_t control_tx_ = 0;
  std::array<uint64_t, static_cast<size_t>(DropReason::kReasonCount)> drops_{};
  std::vector<LatencyRecord> latencies_;
  std::unordered_set<uint64_t> delivered_ids_;
};

}  // namespace adhocsim
