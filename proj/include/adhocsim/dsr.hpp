#pragma once

#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "adhocsim/protocol.hpp"

namespace adhocsim {
namespace dsr {

/// Bounded path cache with LRU eviction. Entries are full node sequences; any
/// contiguous subpath is usable without separate storage, so a stored route
/// through an intermediate node also answers lookups for that node.
class RouteCache {
 public:
  explicit RouteCache(size_t capacity);

  enum class InsertResult { kStored, kRefreshed, kRejectedLoop };
  InsertResult insert(std::vector<NodeId> route, SimTime now);

  /// Fewest-hop subpath from `self` to `dest` among all entries; ties break
  /// by most recent last_used. Refreshes last_used of the winning entry.
  std::optional<std::vector<NodeId>> lookup(NodeId self, NodeId dest, SimTime now);

  /// Drops every entry containing the directed link (u, v).
  void purge_link(NodeId u, NodeId v);

  size_t size() const { return entries_.size(); }
  size_t capacity() const { return capacity_; }
  bool holds(const std::vector<NodeId>& route) const;
  bool any_contains_link(NodeId u, NodeId v) const;

 private:
  struct Entry {
    std::vector<NodeId> route;
    SimTime last_used;
    SimTime inserted;
    uint64_t order;  // tie-break for identical timestamps
  };
  std::vector<Entry> entries_;
  size_t capacity_;
  uint64_t next_order_ = 0;
};

class DsrProtocol final : public RoutingProtocol {
 public:
  DsrProtocol(DsrConfig cfg, RoutingEnv& env);

  void send_data(DataPacket pkt) override;
  void on_frame(const Frame& f, NodeId from) override;
  void on_overhear(const Frame& f, NodeId from) override;
  void on_tx_failed(const Frame& f, NodeId next_hop) override;

  RouteCache& cache() { return cache_; }
  const DsrConfig& config() const { return cfg_; }

 private:
  struct Buffered {
    DataPacket pkt;
    SimTime expires;
  };
  struct Discovery {
    uint32_t request_id = 0;
    double timeout = 0.0;
    EventHandle timer;
  };

  void buffer_packet(DataPacket pkt);
  void sweep_buffer();
  void start_discovery(NodeId target);
  void issue_rreq(NodeId target, Discovery& d);
  void discovery_timeout(NodeId target);
  void flush_buffer(NodeId target);
  void send_along(DataPacket pkt);

  void handle_rreq(dsr_msg::Rreq rreq, NodeId from);
  void handle_rrep(const dsr_msg::Rrep& rrep, NodeId from);
  void handle_rerr(dsr_msg::Rerr rerr, NodeId from);
  void handle_data(DataPacket pkt, NodeId from);
  void salvage(DataPacket pkt, NodeId broken_next);
  void send_rerr_to_source(const DataPacket& pkt, NodeId broken_next);

  DsrConfig cfg_;
  RoutingEnv& env_;
  RouteCache cache_;
  uint32_t next_request_id_ = 0;
  std::map<NodeId, std::deque<Buffered>> send_buffer_;
  std::map<NodeId, Discovery> discoveries_;
  std::map<std::pair<NodeId, uint32_t>, SimTime> seen_rreqs_;
  bool sweep_scheduled_ = false;
};

}  // namespace dsr
}  // namespace adhocsim
