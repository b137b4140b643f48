#include "adhocsim/medium.hpp"

#include <algorithm>
#include <stdexcept>

namespace adhocsim {

MacConfig MacConfig::preset_80211() { return MacConfig{}; }

MacConfig MacConfig::preset_80211p() {
  MacConfig c;
  c.slot_s = 13e-6;
  c.difs_s = 58e-6;  // SIFS 32us + 2 slots
  c.cw_min = 15;
  c.cw_max = 1023;
  return c;
}

void MacConfig::validate() const {
  if (slot_s <= 0.0 || difs_s < 0.0)
    throw std::invalid_argument("mac: slot/difs must be positive");
  if (cw_min < 0 || cw_min > cw_max)
    throw std::invalid_argument("mac: need 0 <= cw_min <= cw_max");
  if (retry_limit < 1) throw std::invalid_argument("mac: retry_limit must be >= 1");
  if (queue_capacity < 1) throw std::invalid_argument("mac: queue_capacity must be >= 1");
}

Medium::Medium(Engine& eng, const MobilityModel& mob, ChannelModel channel,
               MacConfig mac, MediumSink& sink, uint64_t master_seed)
    : eng_(eng), mob_(mob), channel_(channel), mac_(mac), sink_(sink) {
  channel_.validate();
  mac_.validate();
  cutoff_ = channel_.max_reception_range();
  const int n = mob_.node_count();
  nodes_.reserve(n);
  phy_rng_.reserve(n);
  intervals_.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    nodes_.emplace_back(RngStream(master_seed, Subsystem::kMac, i));
    phy_rng_.emplace_back(master_seed, Subsystem::kPhy, i);
  }
}

double Medium::airtime(const Frame& f) const {
  return (f.size_bytes + mac_.header_overhead_bytes) * 8.0 / channel_.data_rate_bps;
}

void Medium::send(NodeId from, Frame f) {
  if (from < 0 || from >= static_cast<NodeId>(nodes_.size()))
    throw std::invalid_argument("Medium::send: unknown node");
  if (f.size_bytes == 0) throw std::invalid_argument("Medium::send: empty frame");
  f.src = from;
  MacState& st = nodes_[from];
  if (st.ctrl_q.size() + st.data_q.size() >= mac_.queue_capacity) {
    sink_.on_queue_drop(from, f);
    return;
  }
  (f.kind == FrameKind::kControl ? st.ctrl_q : st.data_q).push_back(std::move(f));
  if (!st.serving) start_service(from);
}

void Medium::start_service(NodeId node) {
  MacState& st = nodes_[node];
  auto& q = !st.ctrl_q.empty() ? st.ctrl_q : st.data_q;
  st.current = std::move(q.front());
  q.pop_front();
  st.serving = true;
  st.attempt = 1;
  st.cw = mac_.cw_min;
  schedule_access(node);
}

SimTime Medium::heard_busy_until(NodeId node) const {
  const SimTime now = eng_.now();
  SimTime until = now;
  const Position me = mob_.position_at(node, now);
  for (const ActiveTx& tx : txs_) {
    if (tx.end <= now) continue;
    if (tx.sender == node) {
      until = std::max(until, tx.end);
      continue;
    }
    if (distance(me, mob_.position_at(tx.sender, now)) <= cutoff_)
      until = std::max(until, tx.end);
  }
  return until;
}

void Medium::schedule_access(NodeId node) {
  MacState& st = nodes_[node];
  const SimTime idle_at = heard_busy_until(node);
  const double backoff = st.rng.uniform_int(static_cast<uint32_t>(st.cw) + 1) * mac_.slot_s;
  const SimTime at = idle_at + mac_.difs_s + backoff;
  eng_.schedule(at, EventKind::kMacAccess, node, [this, node] { on_access(node); });
}

void Medium::on_access(NodeId node) {
  MacState& st = nodes_[node];
  if (heard_busy_until(node) > eng_.now()) {
    // Someone grabbed the air during our backoff; contend again.
    schedule_access(node);
    return;
  }
  const SimTime now = eng_.now();
  const SimTime end = now + airtime(st.current);
  const uint64_t id = next_tx_id_++;
  txs_.push_back(ActiveTx{id, node, now, end});
  if (record_intervals_) intervals_[node].emplace_back(now, end);
  sink_.on_transmit_start(node, st.current, st.attempt);
  eng_.schedule(end, EventKind::kFrameDelivery, node,
                [this, node, id] { on_tx_end(node, id); });
}

void Medium::on_tx_end(NodeId node, uint64_t tx_id) {
  const SimTime now = eng_.now();
  const auto tx_it = std::find_if(txs_.begin(), txs_.end(),
                                  [&](const ActiveTx& t) { return t.id == tx_id; });
  const ActiveTx tx = *tx_it;  // copy; prune may shuffle the vector
  MacState& st = nodes_[node];
  const Frame& frame = st.current;

  // Geometry is evaluated at end of airtime; node displacement over one
  // airtime is centimeters at vehicular speeds.
  bool dst_received = false;
  const Position sender_pos = mob_.position_at(node, now);
  const int n = static_cast<int>(nodes_.size());
  for (NodeId r = 0; r < n; ++r) {
    if (r == node) continue;
    const Position rp = mob_.position_at(r, now);
    const double dist = distance(sender_pos, rp);
    if (dist > cutoff_) continue;
    bool lost = false;
    for (const ActiveTx& other : txs_) {
      if (other.id == tx.id || other.sender == node) continue;
      if (!(other.start < tx.end && tx.start < other.end)) continue;
      if (other.sender == r) {  // half-duplex: r was transmitting itself
        lost = true;
        break;
      }
      if (distance(rp, mob_.position_at(other.sender, now)) <= cutoff_) {
        lost = true;  // binary collision, no capture
        break;
      }
    }
    if (lost) continue;
    if (phy_rng_[r].u01() >= channel_.reception_probability(dist)) continue;
    if (frame.dst == kBroadcast || frame.dst == r) {
      if (frame.dst == r) dst_received = true;
      sink_.on_frame(r, frame, node);
    } else {
      sink_.on_overhear(r, frame, node);
    }
  }

  prune(now);

  if (frame.dst == kBroadcast || dst_received) {
    finish_service(node);
    return;
  }
  if (st.attempt >= mac_.retry_limit) {
    const Frame failed = std::move(st.current);
    st.serving = false;
    sink_.on_tx_failed(node, failed, failed.dst);
    // The failure handler may have queued new frames on this node.
    if (!st.serving && (!st.ctrl_q.empty() || !st.data_q.empty())) start_service(node);
    return;
  }
  ++st.attempt;
  st.cw = std::min(2 * st.cw + 1, mac_.cw_max);
  schedule_access(node);
}

void Medium::finish_service(NodeId node) {
  MacState& st = nodes_[node];
  st.serving = false;
  if (!st.ctrl_q.empty() || !st.data_q.empty()) start_service(node);
}

void Medium::prune(SimTime now) {
  // Keep a history window comfortably longer than any airtime so overlap
  // checks against recently-ended transmissions stay valid.
  const SimTime horizon = now - 0.1;
  std::erase_if(txs_, [&](const ActiveTx& t) { return t.end < horizon; });
}

}  // namespace adhocsim
