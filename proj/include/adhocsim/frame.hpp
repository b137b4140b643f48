#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "adhocsim/types.hpp"

namespace adhocsim {

enum class FrameKind : uint8_t { kData, kControl };

/// Application datagram plus the per-hop bookkeeping the protocols need.
struct DataPacket {
  uint64_t id = 0;
  NodeId origin = kNoNode;
  NodeId final_dst = kNoNode;
  SimTime app_sent = 0.0;
  uint32_t payload_bytes = 512;
  int hops_traveled = 0;

  // DSR source routing; empty for table-driven protocols.
  std::vector<NodeId> source_route;  // origin .. final_dst
  uint32_t sr_index = 0;             // index of the current holder in source_route
  int salvage_count = 0;
};

namespace aodv_msg {

struct Rreq {
  NodeId originator = kNoNode;
  uint32_t originator_seq = 0;
  uint32_t rreq_id = 0;
  NodeId dest = kNoNode;
  uint32_t dest_seq = 0;
  bool dest_seq_known = false;
  int hop_count = 0;  // hops traveled so far
  int ttl = 0;        // remaining after each forward decrements
};

struct Rrep {
  NodeId dest = kNoNode;       // node the route leads to
  uint32_t dest_seq = 0;
  NodeId originator = kNoNode; // requester the reply travels to
  int hop_count = 0;           // hops from responder to dest
  SimTime lifetime = 0.0;
  bool is_hello = false;
  bool gratuitous = false;
};

struct Rerr {
  std::vector<std::pair<NodeId, uint32_t>> unreachable;  // (dest, seq)
};

}  // namespace aodv_msg

namespace dsr_msg {

struct Rreq {
  NodeId originator = kNoNode;
  NodeId target = kNoNode;
  uint32_t request_id = 0;
  std::vector<NodeId> path;  // accumulated, path.front() == originator
};

struct Rrep {
  NodeId requester = kNoNode;
  std::vector<NodeId> route;  // full path requester .. target
  bool gratuitous = false;
};

struct Rerr {
  NodeId source = kNoNode;  // of the packet that hit the break
  NodeId broken_from = kNoNode;
  NodeId broken_to = kNoNode;
  std::vector<NodeId> route;  // travel path: failing node .. source
  uint32_t index = 0;         // current holder position in route
};

}  // namespace dsr_msg

namespace fsr_msg {

struct LinkState {
  NodeId origin = kNoNode;
  uint32_t seq = 0;
  std::vector<NodeId> neighbors;
};

struct Update {
  std::vector<LinkState> entries;
};

}  // namespace fsr_msg

using FramePayload = std::variant<DataPacket, aodv_msg::Rreq, aodv_msg::Rrep,
                                  aodv_msg::Rerr, dsr_msg::Rreq, dsr_msg::Rrep,
                                  dsr_msg::Rerr, fsr_msg::Update>;

/// One link-layer transmission unit. `dst` is the next hop (or kBroadcast);
/// `size_bytes` covers protocol payload and network headers but not the MAC
/// overhead, which MacConfig adds at airtime computation.
struct Frame {
  NodeId src = kNoNode;
  NodeId dst = kBroadcast;
  uint32_t size_bytes = 0;
  FrameKind kind = FrameKind::kControl;
  FramePayload payload;
};

/// Nominal wire sizes (bytes); coarse NS-2-like figures, they only shape
/// airtime and congestion.
uint32_t wire_size(const FramePayload& p);

Frame make_data_frame(NodeId from, NodeId next_hop, DataPacket pkt);
Frame make_control_frame(NodeId from, NodeId dst, FramePayload payload);

}  // namespace adhocsim
