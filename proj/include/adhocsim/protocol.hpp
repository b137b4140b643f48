#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>

#include "adhocsim/engine.hpp"
#include "adhocsim/frame.hpp"
#include "adhocsim/metrics.hpp"
#include "adhocsim/rng.hpp"

namespace adhocsim {

/// Scheduling policy for flood (broadcast) forwarding. The default adds a
/// small uniform jitter like classic NS-2 agents do. Slotted mode serializes
/// forwarders deterministically by node id with a per-hop base delay that
/// dominates the spread, which makes flood arrival order equal hop-count
/// order; oracle tests use it to compare discovered routes against BFS.
struct FloodTiming {
  double base_delay_s = 0.0;
  double jitter_s = 0.010;
  bool slotted = false;
  double slot_width_s = 0.0015;
  int slot_modulus = 64;

  double forward_delay(NodeId node, RngStream& rng) const {
    if (slotted) return base_delay_s + (node % slot_modulus) * slot_width_s;
    return base_delay_s + (jitter_s > 0.0 ? rng.uniform(0.0, jitter_s) : 0.0);
  }

  static FloodTiming slotted_oracle() {
    FloodTiming t;
    t.base_delay_s = 0.3;
    t.slotted = true;
    return t;
  }
};

struct AodvConfig {
  int ttl_start = 1;
  int ttl_increment = 2;
  int ttl_threshold = 7;
  int net_diameter = 35;
  int rreq_retries = 2;          // repeats at net_diameter before giving up
  double node_traversal_s = 0.040;
  double active_route_timeout_s = 3.0;
  double hello_interval_s = 1.0;  // 0 disables hellos entirely
  int allowed_hello_loss = 2;
  bool local_repair = true;
  bool gratuitous_rrep = true;
  bool dest_only_rrep = false;    // suppress intermediate replies (RFC 'D' flag)
  int local_add_ttl = 2;
  size_t send_buffer_capacity = 64;
  FloodTiming flood;

  static AodvConfig standard();
  static AodvConfig mod();  // ERS preset TTL_START=2, INCREMENT=4, THRESHOLD=9
  void validate() const;
};

struct DsrConfig {
  size_t cache_capacity = 1024;  // MOD preset: 256
  bool promiscuous = true;
  bool reply_from_cache = true;
  bool gratuitous_rrep = true;
  int max_salvage = 15;
  size_t send_buffer_capacity = 64;
  double send_buffer_timeout_s = 30.0;
  double discovery_timeout_s = 0.5;       // doubles per retry
  double discovery_timeout_max_s = 16.0;  // backoff cap
  double rrep_jitter_s = 0.010;
  FloodTiming flood;

  static DsrConfig standard();
  static DsrConfig mod();  // cache capacity 256
  void validate() const;
};

struct FsrConfig {
  int inner_radius = 2;          // hops
  double inner_interval_s = 5.0;  // MOD: 1.0
  double outer_interval_s = 15.0; // MOD: 3.0
  double neighbor_hold_factor = 3.0;   // neighbor alive within factor*inner
  double entry_expiry_factor = 6.0;    // purge entries after factor*outer

  static FsrConfig standard();
  static FsrConfig mod();
  void validate() const;
};

using ProtocolConfig = std::variant<AodvConfig, DsrConfig, FsrConfig>;

enum class ProtocolKind { kAodv, kModAodv, kDsr, kModDsr, kFsr, kModFsr };

std::string to_string(ProtocolKind k);
ProtocolKind protocol_from_string(const std::string& name);
ProtocolConfig default_protocol_config(ProtocolKind k);

/// Per-node services handed to a routing protocol instance by the simulation.
class RoutingEnv {
 public:
  virtual ~RoutingEnv() = default;
  virtual NodeId self() const = 0;
  virtual int node_count() const = 0;
  virtual SimTime now() const = 0;
  virtual EventHandle schedule(SimTime at, EventKind kind,
                               std::function<void()> fn) = 0;
  virtual void cancel(EventHandle h) = 0;
  virtual void send_frame(Frame f) = 0;
  virtual void deliver_to_app(const DataPacket& pkt) = 0;
  virtual void drop_data(const DataPacket& pkt, DropReason r) = 0;
  virtual RngStream& rng() = 0;
};

/// One instance per node, owned by its engine; strictly single-threaded.
class RoutingProtocol {
 public:
  virtual ~RoutingProtocol() = default;
  virtual void start() {}
  /// Application-origin datagram.
  virtual void send_data(DataPacket pkt) = 0;
  /// Frame addressed to this node (or broadcast), already past the channel.
  virtual void on_frame(const Frame& f, NodeId from) = 0;
  /// Frame overheard in promiscuous mode.
  virtual void on_overhear(const Frame&, NodeId) {}
  /// Link-layer gave up on a unicast after its retry budget.
  virtual void on_tx_failed(const Frame& f, NodeId next_hop) = 0;
};

std::unique_ptr<RoutingProtocol> make_protocol(const ProtocolConfig& cfg,
                                               RoutingEnv& env);

}  // namespace adhocsim
