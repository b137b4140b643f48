#pragma once

#include <map>
#include <set>
#include <vector>

#include "adhocsim/protocol.hpp"

namespace adhocsim {
namespace fsr {

enum class Scope { kInner, kOuter };

class FsrProtocol final : public RoutingProtocol {
 public:
  FsrProtocol(FsrConfig cfg, RoutingEnv& env);

  void start() override;
  void send_data(DataPacket pkt) override;
  void on_frame(const Frame& f, NodeId from) override;
  void on_tx_failed(const Frame& f, NodeId next_hop) override;

  /// Inner iff the current routing computation puts dest within inner_radius
  /// hops; unknown or unreachable destinations are outer.
  Scope scope_of(NodeId dest) const;

  // Introspection for tests.
  const std::map<NodeId, NodeId>& next_hops() const { return next_hop_; }
  const std::map<NodeId, int>& distances() const { return dist_; }
  uint64_t broadcasts() const { return broadcasts_; }
  uint64_t full_broadcasts() const { return full_broadcasts_; }
  uint32_t stored_seq(NodeId origin) const;

 private:
  struct TopoEntry {
    uint32_t seq = 0;
    std::vector<NodeId> neighbors;
    SimTime last_refresh = 0.0;
  };

  void update_tick();
  void process_update(const fsr_msg::Update& u, NodeId from);
  void compute_routes();
  std::vector<NodeId> live_neighbors() const;

  FsrConfig cfg_;
  RoutingEnv& env_;
  uint32_t own_seq_ = 0;
  uint64_t tick_ = 0;
  uint64_t broadcasts_ = 0;
  uint64_t full_broadcasts_ = 0;
  std::map<NodeId, TopoEntry> table_;  // keyed by origin; excludes self
  std::map<NodeId, SimTime> heard_;    // direct neighbor liveness
  std::map<NodeId, NodeId> next_hop_;
  std::map<NodeId, int> dist_;
};

}  // namespace fsr
}  // namespace adhocsim
