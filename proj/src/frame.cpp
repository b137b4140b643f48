#include "adhocsim/frame.hpp"

namespace adhocsim {

namespace {

constexpr uint32_t kNetHeader = 20;

struct SizeVisitor {
  uint32_t operator()(const DataPacket& p) const {
    uint32_t sz = kNetHeader + p.payload_bytes;
    if (!p.source_route.empty())
      sz += 8 + 4 * static_cast<uint32_t>(p.source_route.size());
    return sz;
  }
  uint32_t operator()(const aodv_msg::Rreq&) const { return kNetHeader + 24; }
  uint32_t operator()(const aodv_msg::Rrep&) const { return kNetHeader + 20; }
  uint32_t operator()(const aodv_msg::Rerr& e) const {
    return kNetHeader + 4 + 8 * static_cast<uint32_t>(e.unreachable.size());
  }
  uint32_t operator()(const dsr_msg::Rreq& r) const {
    return kNetHeader + 8 + 4 * static_cast<uint32_t>(r.path.size());
  }
  uint32_t operator()(const dsr_msg::Rrep& r) const {
    return kNetHeader + 8 + 4 * static_cast<uint32_t>(r.route.size());
  }
  uint32_t operator()(const dsr_msg::Rerr& e) const {
    return kNetHeader + 12 + 4 * static_cast<uint32_t>(e.route.size());
  }
  uint32_t operator()(const fsr_msg::Update& u) const {
    uint32_t sz = kNetHeader + 4;
    for (const auto& e : u.entries)
      sz += 8 + 4 * static_cast<uint32_t>(e.neighbors.size());
    return sz;
  }
};

}  // namespace

uint32_t wire_size(const FramePayload& p) { return std::visit(SizeVisitor{}, p); }

Frame make_data_frame(NodeId from, NodeId next_hop, DataPacket pkt) {
  Frame f;
  f.src = from;
  f.dst = next_hop;
  f.kind = FrameKind::kData;
  f.size_bytes = SizeVisitor{}(pkt);
  f.payload = std::move(pkt);
  return f;
}

Frame make_control_frame(NodeId from, NodeId dst, FramePayload payload) {
  Frame f;
  f.src = from;
  f.dst = dst;
  f.kind = FrameKind::kControl;
  f.size_bytes = wire_size(payload);
  f.payload = std::move(payload);
  return f;
}

}  // namespace adhocsim
