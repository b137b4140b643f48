#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "adhocsim/channel.hpp"
#include "adhocsim/engine.hpp"
#include "adhocsim/frame.hpp"
#include "adhocsim/mobility.hpp"
#include "adhocsim/rng.hpp"

namespace adhocsim {

/// Simplified CSMA/CA parameters. 802.11p differs in slot/DIFS/contention
/// constants; EDCA access categories are out of scope.
struct MacConfig {
  double slot_s = 20e-6;
  double difs_s = 50e-6;
  int cw_min = 31;
  int cw_max = 1023;
  int retry_limit = 7;              // total attempts for a unicast frame
  uint32_t header_overhead_bytes = 28;
  size_t queue_capacity = 50;       // drop-tail, routing control before data

  static MacConfig preset_80211();
  static MacConfig preset_80211p();
  void validate() const;
};

/// Receives link-layer outcomes; implemented by the simulation glue.
class MediumSink {
 public:
  virtual ~MediumSink() = default;
  virtual void on_frame(NodeId self, const Frame& f, NodeId from) = 0;
  virtual void on_overhear(NodeId, const Frame&, NodeId) {}
  virtual void on_tx_failed(NodeId self, const Frame& f, NodeId next_hop) = 0;
  virtual void on_transmit_start(NodeId, const Frame&, int /*attempt*/) {}
  virtual void on_queue_drop(NodeId, const Frame&) {}
};

/// Shared wireless medium plus one CSMA/CA MAC instance per node.
///
/// Transmission: carrier sense, DIFS, uniform backoff in [0, cw] slots, then
/// the frame occupies the air for (size + MAC overhead) * 8 / rate seconds.
/// Reception per in-range candidate is an independent Bernoulli draw from the
/// channel model, destroyed by any overlapping in-range transmission (binary
/// collisions, no capture). Unicast acknowledgment is modeled as ideal: the
/// sender learns the outcome at end of airtime, retries with doubled cw up to
/// retry_limit attempts, then signals tx-failure to the owning protocol.
class Medium {
 public:
  Medium(Engine& eng, const MobilityModel& mob, ChannelModel channel,
         MacConfig mac, MediumSink& sink, uint64_t master_seed);

  /// Enqueues a frame at `from`'s MAC. Control frames queue ahead of data;
  /// the queue drop-tails at capacity.
  void send(NodeId from, Frame f);

  double airtime(const Frame& f) const;
  const ChannelModel& channel() const { return channel_; }
  const MacConfig& mac() const { return mac_; }

  /// Per-node transmission intervals recorded when tracing (tests only).
  void record_tx_intervals(bool on) { record_intervals_ = on; }
  const std::vector<std::vector<std::pair<SimTime, SimTime>>>& tx_intervals() const {
    return intervals_;
  }

 private:
  struct ActiveTx {
    uint64_t id;
    NodeId sender;
    SimTime start;
    SimTime end;
  };

  struct MacState {
    std::deque<Frame> ctrl_q;
    std::deque<Frame> data_q;
    bool serving = false;
    Frame current;
    int attempt = 0;
    int cw = 0;
    RngStream rng;
    explicit MacState(RngStream r) : rng(std::move(r)) {}
  };

  void start_service(NodeId node);
  void schedule_access(NodeId node);
  void on_access(NodeId node);
  void on_tx_end(NodeId node, uint64_t tx_id);
  void finish_service(NodeId node);
  SimTime heard_busy_until(NodeId node) const;
  void prune(SimTime now);

  Engine& eng_;
  const MobilityModel& mob_;
  ChannelModel channel_;
  MacConfig mac_;
  MediumSink& sink_;
  double cutoff_;  // candidate/interference radius
  uint64_t next_tx_id_ = 1;

  std::vector<MacState> nodes_;
  std::vector<RngStream> phy_rng_;
  std::vector<ActiveTx> txs_;  // in-air plus a short history window

  bool record_intervals_ = false;
  std::vector<std::vector<std::pair<SimTime, SimTime>>> intervals_;
};

}  // namespace adhocsim
