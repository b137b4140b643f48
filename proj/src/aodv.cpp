#include "adhocsim/aodv.hpp"

#include <algorithm>
#include <stdexcept>

namespace adhocsim {

AodvConfig AodvConfig::standard() { return AodvConfig{}; }

AodvConfig AodvConfig::mod() {
  AodvConfig c;
  c.ttl_start = 2;
  c.ttl_increment = 4;
  c.ttl_threshold = 9;
  return c;
}

void AodvConfig::validate() const {
  if (ttl_start < 1) throw std::invalid_argument("aodv: ttl_start must be >= 1");
  if (ttl_increment < 1) throw std::invalid_argument("aodv: ttl_increment must be >= 1");
  if (ttl_threshold >= net_diameter)
    throw std::invalid_argument("aodv: ttl_threshold must be < net_diameter");
  if (rreq_retries < 0) throw std::invalid_argument("aodv: rreq_retries must be >= 0");
  if (node_traversal_s <= 0.0)
    throw std::invalid_argument("aodv: node_traversal must be positive");
  if (hello_interval_s < 0.0)
    throw std::invalid_argument("aodv: hello_interval must be >= 0");
  if (allowed_hello_loss < 1)
    throw std::invalid_argument("aodv: allowed_hello_loss must be >= 1");
}

namespace aodv {

namespace {

constexpr int kMaxDataHops = 64;

}  // namespace

int next_ttl(std::optional<int> previous, const AodvConfig& cfg) {
  if (!previous.has_value()) return cfg.ttl_start;
  if (*previous >= cfg.net_diameter) return cfg.net_diameter;
  const int inc = *previous + cfg.ttl_increment;
  return inc <= cfg.ttl_threshold ? inc : cfg.net_diameter;
}

std::vector<int> ers_ttl_sequence(const AodvConfig& cfg) {
  std::vector<int> seq;
  std::optional<int> prev;
  for (;;) {
    const int ttl = next_ttl(prev, cfg);
    seq.push_back(ttl);
    if (ttl >= cfg.net_diameter) return seq;
    prev = ttl;
  }
}

AodvProtocol::AodvProtocol(AodvConfig cfg, RoutingEnv& env) : cfg_(cfg), env_(env) {
  cfg_.validate();
}

void AodvProtocol::start() {
  if (cfg_.hello_interval_s > 0.0) {
    const SimTime phase = env_.rng().uniform(0.0, cfg_.hello_interval_s);
    env_.schedule(env_.now() + cfg_.hello_interval_s + phase, EventKind::kTimerExpiry,
                  [this] { hello_tick(); });
  }
}

bool AodvProtocol::has_valid_route(NodeId dest) const {
  auto it = routes_.find(dest);
  return it != routes_.end() && it->second.state == RouteEntry::State::kValid &&
         it->second.expires > env_.now();
}

RouteEntry* AodvProtocol::valid_route(NodeId dest) {
  auto it = routes_.find(dest);
  if (it == routes_.end()) return nullptr;
  RouteEntry& e = it->second;
  if (e.state != RouteEntry::State::kValid) return nullptr;
  if (e.expires <= env_.now()) {
    e.state = RouteEntry::State::kInvalid;
    return nullptr;
  }
  return &e;
}

void AodvProtocol::refresh(NodeId dest) {
  auto it = routes_.find(dest);
  if (it != routes_.end() && it->second.state == RouteEntry::State::kValid)
    it->second.expires =
        std::max(it->second.expires, env_.now() + cfg_.active_route_timeout_s);
}

void AodvProtocol::note_neighbor(NodeId n) { last_heard_[n] = env_.now(); }

// ---------------------------------------------------------------------------
// Data path

void AodvProtocol::send_data(DataPacket pkt) {
  if (pkt.final_dst == env_.self()) {
    env_.deliver_to_app(pkt);
    return;
  }
  if (RouteEntry* e = valid_route(pkt.final_dst)) {
    forward_data(std::move(pkt), *e);
    return;
  }
  const NodeId dest = pkt.final_dst;
  const bool fresh = !pending_.count(dest);
  Discovery& d = pending_[dest];
  buffer_packet(d, std::move(pkt));
  if (fresh) start_discovery(dest);
}

void AodvProtocol::buffer_packet(Discovery& d, DataPacket pkt) {
  if (d.buffer.size() >= cfg_.send_buffer_capacity) {
    env_.drop_data(d.buffer.front(), DropReason::kBufferOverflow);
    d.buffer.pop_front();
  }
  d.buffer.push_back(std::move(pkt));
}

void AodvProtocol::forward_data(DataPacket pkt, const RouteEntry& entry) {
  refresh(pkt.final_dst);
  refresh(entry.next_hop);
  env_.send_frame(make_data_frame(env_.self(), entry.next_hop, std::move(pkt)));
}

void AodvProtocol::handle_data(DataPacket pkt, NodeId from) {
  ++pkt.hops_traveled;
  refresh(pkt.origin);
  refresh(from);
  if (pkt.final_dst == env_.self()) {
    env_.deliver_to_app(pkt);
    return;
  }
  if (pkt.hops_traveled >= kMaxDataHops) {
    env_.drop_data(pkt, DropReason::kHopLimit);
    return;
  }
  if (RouteEntry* e = valid_route(pkt.final_dst)) {
    forward_data(std::move(pkt), *e);
    return;
  }
  auto p = pending_.find(pkt.final_dst);
  if (p != pending_.end()) {
    // A repair (or discovery) is in flight here; hold the packet for it.
    buffer_packet(p->second, std::move(pkt));
    return;
  }
  // Stale forwarding state upstream: report and drop.
  auto it = routes_.find(pkt.final_dst);
  const uint32_t seq = it != routes_.end() ? it->second.dest_seq : 0;
  send_rerr({{pkt.final_dst, seq}}, {from});
  env_.drop_data(pkt, DropReason::kNoRoute);
}

// ---------------------------------------------------------------------------
// Route discovery

void AodvProtocol::start_discovery(NodeId dest) {
  Discovery& d = pending_.at(dest);
  issue_rreq(dest, d, next_ttl(d.last_ttl, cfg_));
}

void AodvProtocol::issue_rreq(NodeId dest, Discovery& d, int ttl) {
  d.last_ttl = ttl;
  ++d.attempts;
  if (ttl >= cfg_.net_diameter) ++d.netwide_attempts;
  ++own_seq_;
  ++rreq_id_;

  aodv_msg::Rreq rreq;
  rreq.originator = env_.self();
  rreq.originator_seq = own_seq_;
  rreq.rreq_id = rreq_id_;
  rreq.dest = dest;
  auto it = routes_.find(dest);
  rreq.dest_seq_known = it != routes_.end() && it->second.seq_known;
  rreq.dest_seq = rreq.dest_seq_known ? it->second.dest_seq : 0;
  rreq.hop_count = 0;
  rreq.ttl = ttl;
  env_.send_frame(make_control_frame(env_.self(), kBroadcast, rreq));

  const SimTime timeout = 2.0 * ttl * cfg_.node_traversal_s;
  d.timer = env_.schedule(env_.now() + timeout, EventKind::kTimerExpiry,
                          [this, dest] { discovery_timeout(dest); });
}

void AodvProtocol::discovery_timeout(NodeId dest) {
  auto it = pending_.find(dest);
  if (it == pending_.end()) return;
  Discovery& d = it->second;
  if (d.repair) {
    // Repairs retry at a fixed TTL instead of escalating.
    if (d.attempts >= 1 + cfg_.rreq_retries) {
      giveup_discovery(dest);
      return;
    }
    issue_rreq(dest, d, d.repair_ttl);
    return;
  }
  const int ttl = next_ttl(d.last_ttl, cfg_);
  if (ttl >= cfg_.net_diameter && d.netwide_attempts >= 1 + cfg_.rreq_retries) {
    giveup_discovery(dest);
    return;
  }
  issue_rreq(dest, d, ttl);
}

void AodvProtocol::giveup_discovery(NodeId dest) {
  auto it = pending_.find(dest);
  if (it == pending_.end()) return;
  Discovery& d = it->second;
  env_.cancel(d.timer);
  for (DataPacket& p : d.buffer) env_.drop_data(p, DropReason::kDiscoveryFailed);
  const bool was_repair = d.repair;
  pending_.erase(it);
  auto rit = routes_.find(dest);
  if (rit != routes_.end()) {
    if (was_repair || rit->second.state == RouteEntry::State::kUnderRepair) {
      // Local repair failed: tell the precursors and invalidate.
      rit->second.state = RouteEntry::State::kInvalid;
      ++rit->second.dest_seq;
      send_rerr({{dest, rit->second.dest_seq}}, rit->second.precursors);
    }
  }
}

void AodvProtocol::flush_buffer(NodeId dest) {
  auto it = pending_.find(dest);
  if (it == pending_.end()) return;
  env_.cancel(it->second.timer);
  std::deque<DataPacket> buffered = std::move(it->second.buffer);
  pending_.erase(it);
  for (DataPacket& p : buffered) send_data(std::move(p));
}

// ---------------------------------------------------------------------------
// Control plane

void AodvProtocol::on_frame(const Frame& f, NodeId from) {
  note_neighbor(from);
  if (const auto* rreq = std::get_if<aodv_msg::Rreq>(&f.payload)) {
    handle_rreq(*rreq, from);
  } else if (const auto* rrep = std::get_if<aodv_msg::Rrep>(&f.payload)) {
    handle_rrep(*rrep, from);
  } else if (const auto* rerr = std::get_if<aodv_msg::Rerr>(&f.payload)) {
    handle_rerr(*rerr, from);
  } else if (const auto* data = std::get_if<DataPacket>(&f.payload)) {
    handle_data(*data, from);
  }
}

void AodvProtocol::handle_rreq(aodv_msg::Rreq rreq, NodeId from) {
  if (rreq.originator == env_.self()) return;
  const auto key = std::make_pair(rreq.originator, rreq.rreq_id);
  auto seen = seen_rreqs_.find(key);
  if (seen != seen_rreqs_.end() && seen->second > env_.now()) return;
  seen_rreqs_[key] = env_.now() + 4.0 * cfg_.node_traversal_s * cfg_.net_diameter;
  if (seen_rreqs_.size() > 4096) {
    std::erase_if(seen_rreqs_, [now = env_.now()](const auto& kv) {
      return kv.second <= now;
    });
  }

  const int hops_here = rreq.hop_count + 1;

  // Install or improve the reverse route toward the originator.
  RouteEntry& rev = routes_[rreq.originator];
  const bool better =
      !rev.seq_known || rreq.originator_seq > rev.dest_seq ||
      (rreq.originator_seq == rev.dest_seq &&
       (rev.state != RouteEntry::State::kValid || hops_here < rev.hop_count));
  if (better) {
    rev.next_hop = from;
    rev.hop_count = hops_here;
    rev.dest_seq = rreq.originator_seq;
    rev.seq_known = true;
    rev.state = RouteEntry::State::kValid;
    rev.expires = std::max(rev.expires, env_.now() + cfg_.active_route_timeout_s);
  }

  if (rreq.dest == env_.self()) {
    own_seq_ = std::max(own_seq_, rreq.dest_seq) + 1;
    aodv_msg::Rrep rrep;
    rrep.dest = env_.self();
    rrep.dest_seq = own_seq_;
    rrep.originator = rreq.originator;
    rrep.hop_count = 0;
    rrep.lifetime = cfg_.active_route_timeout_s;
    env_.send_frame(make_control_frame(env_.self(), from, rrep));
    return;
  }

  RouteEntry* fwd = valid_route(rreq.dest);
  const bool can_reply = !cfg_.dest_only_rrep && fwd && fwd->seq_known &&
                         (!rreq.dest_seq_known || fwd->dest_seq >= rreq.dest_seq);
  if (can_reply) {
    aodv_msg::Rrep rrep;
    rrep.dest = rreq.dest;
    rrep.dest_seq = fwd->dest_seq;
    rrep.originator = rreq.originator;
    rrep.hop_count = fwd->hop_count;
    rrep.lifetime = fwd->expires - env_.now();
    fwd->precursors.insert(from);
    routes_[rreq.originator].precursors.insert(fwd->next_hop);
    env_.send_frame(make_control_frame(env_.self(), from, rrep));

    if (cfg_.gratuitous_rrep) {
      // Tell the destination how to reach the originator.
      aodv_msg::Rrep grat;
      grat.dest = rreq.originator;
      grat.dest_seq = rreq.originator_seq;
      grat.originator = rreq.dest;
      grat.hop_count = routes_[rreq.originator].hop_count;
      grat.lifetime = cfg_.active_route_timeout_s;
      grat.gratuitous = true;
      env_.send_frame(make_control_frame(env_.self(), fwd->next_hop, grat));
    }
    return;
  }

  if (rreq.ttl - 1 <= 0) return;
  rreq.ttl -= 1;
  rreq.hop_count = hops_here;
  const SimTime delay = cfg_.flood.forward_delay(env_.self(), env_.rng());
  env_.schedule(env_.now() + delay, EventKind::kTimerExpiry, [this, rreq] {
    env_.send_frame(make_control_frame(env_.self(), kBroadcast, rreq));
  });
}

void AodvProtocol::handle_rrep(const aodv_msg::Rrep& rrep, NodeId from) {
  if (rrep.is_hello) {
    RouteEntry& e = routes_[rrep.dest];
    if (e.state != RouteEntry::State::kValid || e.next_hop == rrep.dest) {
      e.next_hop = rrep.dest;
      e.hop_count = 1;
      e.dest_seq = std::max(e.dest_seq, rrep.dest_seq);
      e.seq_known = true;
      e.state = RouteEntry::State::kValid;
      e.expires = std::max(e.expires, env_.now() + rrep.lifetime);
    }
    return;
  }

  RouteEntry& e = routes_[rrep.dest];
  const int hops_here = rrep.hop_count + 1;
  // Accept if fresher, or equally fresh while the entry is unusable or the
  // new path is shorter. Never step the sequence number backwards.
  const bool better =
      !e.seq_known || rrep.dest_seq > e.dest_seq ||
      (rrep.dest_seq == e.dest_seq &&
       (e.state != RouteEntry::State::kValid || hops_here < e.hop_count));
  if (better) {
    e.next_hop = from;
    e.hop_count = hops_here;
    e.dest_seq = rrep.dest_seq;
    e.seq_known = true;
    e.state = RouteEntry::State::kValid;
    e.expires = std::max(e.expires, env_.now() + rrep.lifetime);
  }

  if (rrep.originator == env_.self()) {
    if (valid_route(rrep.dest)) flush_buffer(rrep.dest);
    return;
  }

  RouteEntry* rev = valid_route(rrep.originator);
  if (!rev) return;  // reverse path evaporated; the originator will retry
  aodv_msg::Rrep fwd = rrep;
  fwd.hop_count = hops_here;
  e.precursors.insert(rev->next_hop);
  rev->precursors.insert(from);
  refresh(rrep.originator);
  env_.send_frame(make_control_frame(env_.self(), rev->next_hop, fwd));
}

void AodvProtocol::handle_rerr(const aodv_msg::Rerr& rerr, NodeId from) {
  std::vector<std::pair<NodeId, uint32_t>> invalidated;
  std::set<NodeId> precursors;
  for (const auto& [dest, seq] : rerr.unreachable) {
    auto it = routes_.find(dest);
    if (it == routes_.end()) continue;
    RouteEntry& e = it->second;
    if (e.state != RouteEntry::State::kValid || e.next_hop != from) continue;
    e.state = RouteEntry::State::kInvalid;
    e.dest_seq = std::max(e.dest_seq, seq);
    e.seq_known = true;
    invalidated.emplace_back(dest, e.dest_seq);
    precursors.insert(e.precursors.begin(), e.precursors.end());
  }
  if (!invalidated.empty()) send_rerr(invalidated, precursors);
}

void AodvProtocol::send_rerr(
    const std::vector<std::pair<NodeId, uint32_t>>& unreachable,
    const std::set<NodeId>& precursors) {
  if (unreachable.empty() || precursors.empty()) return;
  aodv_msg::Rerr rerr;
  rerr.unreachable = unreachable;
  const NodeId dst = precursors.size() == 1 ? *precursors.begin() : kBroadcast;
  env_.send_frame(make_control_frame(env_.self(), dst, rerr));
}

// ---------------------------------------------------------------------------
// Route maintenance

void AodvProtocol::on_tx_failed(const Frame& f, NodeId next_hop) {
  last_heard_.erase(next_hop);
  if (const auto* data = std::get_if<DataPacket>(&f.payload)) {
    link_break(next_hop, *data);
  } else {
    link_break(next_hop, std::nullopt);
  }
}

void AodvProtocol::link_break(NodeId neighbor, std::optional<DataPacket> pkt) {
  // Collect every route that dies with this next hop.
  std::vector<std::pair<NodeId, uint32_t>> lost;
  std::set<NodeId> precursors;
  std::optional<NodeId> repairable;

  for (auto& [dest, e] : routes_) {
    if (e.state != RouteEntry::State::kValid || e.next_hop != neighbor) continue;
    if (pkt && dest == pkt->final_dst && cfg_.local_repair &&
        e.hop_count < pkt->hops_traveled) {
      repairable = dest;  // break lies closer to the destination than the source
      continue;
    }
    e.state = RouteEntry::State::kInvalid;
    ++e.dest_seq;
    lost.emplace_back(dest, e.dest_seq);
    precursors.insert(e.precursors.begin(), e.precursors.end());
  }
  send_rerr(lost, precursors);

  if (repairable) {
    begin_local_repair(*repairable, std::move(*pkt));
  } else if (pkt) {
    env_.drop_data(*pkt, DropReason::kRetryExhausted);
  }
}

void AodvProtocol::begin_local_repair(NodeId dest, DataPacket pkt) {
  RouteEntry& e = routes_.at(dest);
  e.state = RouteEntry::State::kUnderRepair;
  // Bumping the requested sequence number keeps nodes whose routes run
  // through this very node from answering with the broken path.
  ++e.dest_seq;
  const int ttl = std::min(
      cfg_.net_diameter,
      std::max(e.hop_count, (e.hop_count + 1) / 2) + cfg_.local_add_ttl);
  const bool fresh = !pending_.count(dest);
  Discovery& d = pending_[dest];
  d.repair = true;
  d.repair_ttl = ttl;
  buffer_packet(d, std::move(pkt));
  if (fresh) issue_rreq(dest, d, ttl);
}

// ---------------------------------------------------------------------------
// Neighbor sensing

void AodvProtocol::hello_tick() {
  const SimTime now = env_.now();

  bool any_active = false;
  for (auto& [dest, e] : routes_) {
    if (e.state == RouteEntry::State::kValid && e.expires > now) {
      any_active = true;
      break;
    }
  }

  if (any_active) {
    aodv_msg::Rrep hello;
    hello.dest = env_.self();
    hello.dest_seq = own_seq_;
    hello.originator = kBroadcast;
    hello.hop_count = 0;
    hello.lifetime = cfg_.allowed_hello_loss * cfg_.hello_interval_s;
    hello.is_hello = true;
    env_.send_frame(make_control_frame(env_.self(), kBroadcast, hello));
  }

  // A next hop silent for allowed_hello_loss intervals is a broken link.
  const SimTime horizon = now - cfg_.allowed_hello_loss * cfg_.hello_interval_s;
  std::set<NodeId> dead;
  for (auto& [dest, e] : routes_) {
    if (e.state != RouteEntry::State::kValid || e.expires <= now) continue;
    auto heard = last_heard_.find(e.next_hop);
    if (heard == last_heard_.end() || heard->second < horizon)
      dead.insert(e.next_hop);
  }
  for (NodeId n : dead) link_break(n, std::nullopt);

  env_.schedule(now + cfg_.hello_interval_s, EventKind::kTimerExpiry,
                [this] { hello_tick(); });
}

}  // namespace aodv
}  // namespace adhocsim
