#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "adhocsim/protocol.hpp"

namespace adhocsim {
namespace aodv {

/// Next expanding-ring TTL. none -> ttl_start; then previous + increment
/// while that stays within ttl_threshold, otherwise net_diameter
/// (network-wide); at net_diameter it repeats (the caller counts retries).
int next_ttl(std::optional<int> previous, const AodvConfig& cfg);

/// The strictly increasing escalation sequence ending at net_diameter,
/// e.g. {1,3,5,7,35} for the RFC defaults and {2,6,35} for the MOD preset.
std::vector<int> ers_ttl_sequence(const AodvConfig& cfg);

struct RouteEntry {
  enum class State { kValid, kInvalid, kUnderRepair };
  NodeId next_hop = kNoNode;
  int hop_count = 0;
  uint32_t dest_seq = 0;
  bool seq_known = false;
  SimTime expires = 0.0;
  State state = State::kInvalid;
  std::set<NodeId> precursors;
};

class AodvProtocol final : public RoutingProtocol {
 public:
  AodvProtocol(AodvConfig cfg, RoutingEnv& env);

  void start() override;
  void send_data(DataPacket pkt) override;
  void on_frame(const Frame& f, NodeId from) override;
  void on_tx_failed(const Frame& f, NodeId next_hop) override;

  // Introspection for tests and audits.
  const std::map<NodeId, RouteEntry>& routes() const { return routes_; }
  bool has_valid_route(NodeId dest) const;
  const AodvConfig& config() const { return cfg_; }
  uint32_t own_seq() const { return own_seq_; }

 private:
  struct Discovery {
    bool repair = false;
    int repair_ttl = 0;
    std::optional<int> last_ttl;
    int attempts = 0;
    int netwide_attempts = 0;  // tries at net_diameter so far
    EventHandle timer;
    std::deque<DataPacket> buffer;
  };

  RouteEntry* valid_route(NodeId dest);
  void refresh(NodeId dest);
  void buffer_packet(Discovery& d, DataPacket pkt);
  void start_discovery(NodeId dest);
  void issue_rreq(NodeId dest, Discovery& d, int ttl);
  void discovery_timeout(NodeId dest);
  void giveup_discovery(NodeId dest);
  void flush_buffer(NodeId dest);

  void handle_rreq(aodv_msg::Rreq rreq, NodeId from);
  void handle_rrep(const aodv_msg::Rrep& rrep, NodeId from);
  void handle_rerr(const aodv_msg::Rerr& rerr, NodeId from);
  void handle_data(DataPacket pkt, NodeId from);

  void forward_data(DataPacket pkt, const RouteEntry& entry);
  void link_break(NodeId neighbor, std::optional<DataPacket> pkt);
  void send_rerr(const std::vector<std::pair<NodeId, uint32_t>>& unreachable,
                 const std::set<NodeId>& precursors);
  void begin_local_repair(NodeId dest, DataPacket pkt);
  void hello_tick();
  void note_neighbor(NodeId n);

  AodvConfig cfg_;
  RoutingEnv& env_;
  uint32_t own_seq_ = 0;
  uint32_t rreq_id_ = 0;
  std::map<NodeId, RouteEntry> routes_;
  std::map<NodeId, Discovery> pending_;
  std::map<std::pair<NodeId, uint32_t>, SimTime> seen_rreqs_;
  std::map<NodeId, SimTime> last_heard_;
};

}  // namespace aodv
}  // namespace adhocsim
