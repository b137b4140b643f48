#include "adhocsim/fsr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adhocsim {

FsrConfig FsrConfig::standard() { return FsrConfig{}; }

FsrConfig FsrConfig::mod() {
  FsrConfig c;
  c.inner_interval_s = 1.0;
  c.outer_interval_s = 3.0;
  return c;
}

void FsrConfig::validate() const {
  if (inner_radius < 1) throw std::invalid_argument("fsr: inner_radius must be >= 1");
  if (inner_interval_s <= 0.0)
    throw std::invalid_argument("fsr: inner_interval must be positive");
  if (inner_interval_s >= outer_interval_s)
    throw std::invalid_argument("fsr: inner_interval must be < outer_interval");
}

namespace fsr {

namespace {

constexpr int kMaxDataHops = 64;

}  // namespace

FsrProtocol::FsrProtocol(FsrConfig cfg, RoutingEnv& env) : cfg_(cfg), env_(env) {
  cfg_.validate();
}

void FsrProtocol::start() {
  // Phase-offset the periodic timer so broadcasts do not synchronize.
  const SimTime phase = env_.rng().uniform(0.0, cfg_.inner_interval_s);
  env_.schedule(env_.now() + phase, EventKind::kPeriodicUpdate,
                [this] { update_tick(); });
}

std::vector<NodeId> FsrProtocol::live_neighbors() const {
  const SimTime horizon =
      env_.now() - cfg_.neighbor_hold_factor * cfg_.inner_interval_s;
  std::vector<NodeId> out;
  for (const auto& [n, t] : heard_)
    if (t >= horizon) out.push_back(n);
  return out;
}

Scope FsrProtocol::scope_of(NodeId dest) const {
  auto it = dist_.find(dest);
  if (it == dist_.end()) return Scope::kOuter;
  return it->second <= cfg_.inner_radius ? Scope::kInner : Scope::kOuter;
}

uint32_t FsrProtocol::stored_seq(NodeId origin) const {
  auto it = table_.find(origin);
  return it == table_.end() ? 0 : it->second.seq;
}

void FsrProtocol::update_tick() {
  const SimTime now = env_.now();
  ++tick_;
  const int ratio = std::max(
      1, static_cast<int>(std::lround(cfg_.outer_interval_s / cfg_.inner_interval_s)));
  const bool full = tick_ % ratio == 0;

  // Purge entries that have not been refreshed for a long time.
  const SimTime expiry = now - cfg_.entry_expiry_factor * cfg_.outer_interval_s;
  std::erase_if(table_, [&](const auto& kv) { return kv.second.last_refresh < expiry; });

  compute_routes();

  fsr_msg::Update update;
  fsr_msg::LinkState own;
  own.origin = env_.self();
  own.seq = ++own_seq_;
  own.neighbors = live_neighbors();
  update.entries.push_back(std::move(own));
  for (const auto& [origin, e] : table_) {
    if (!full && scope_of(origin) != Scope::kInner) continue;
    fsr_msg::LinkState ls;
    ls.origin = origin;
    ls.seq = e.seq;
    ls.neighbors = e.neighbors;
    update.entries.push_back(std::move(ls));
  }

  env_.send_frame(make_control_frame(env_.self(), kBroadcast, update));
  ++broadcasts_;
  if (full) ++full_broadcasts_;

  env_.schedule(now + cfg_.inner_interval_s, EventKind::kPeriodicUpdate,
                [this] { update_tick(); });
}

void FsrProtocol::process_update(const fsr_msg::Update& u, NodeId from) {
  heard_[from] = env_.now();
  for (const fsr_msg::LinkState& ls : u.entries) {
    if (ls.origin == env_.self()) continue;
    TopoEntry& e = table_[ls.origin];
    if (ls.seq > e.seq) {
      e.seq = ls.seq;
      e.neighbors = ls.neighbors;
      e.last_refresh = env_.now();
    } else if (ls.seq == e.seq) {
      // Same snapshot still circulating: entry is alive, content unchanged.
      e.last_refresh = env_.now();
    }
    // Strictly older snapshots are ignored; no triggered rebroadcast either
    // way, so the control rate stays independent of topology churn.
  }
  compute_routes();
}

void FsrProtocol::compute_routes() {
  next_hop_.clear();
  dist_.clear();

  // Undirected union of reported adjacencies plus our live neighbor view.
  std::map<NodeId, std::set<NodeId>> adj;
  const NodeId self = env_.self();
  for (NodeId n : live_neighbors()) {
    adj[self].insert(n);
    adj[n].insert(self);
  }
  for (const auto& [origin, e] : table_) {
    for (NodeId n : e.neighbors) {
      adj[origin].insert(n);
      adj[n].insert(origin);
    }
  }

  // BFS by levels; among equal-hop paths the smallest first-hop id wins.
  dist_[self] = 0;
  std::vector<NodeId> frontier{self};
  int level = 0;
  while (!frontier.empty()) {
    ++level;
    std::set<NodeId> next_frontier;
    for (NodeId u : frontier) {
      auto au = adj.find(u);
      if (au == adj.end()) continue;
      for (NodeId w : au->second) {
        auto d = dist_.find(w);
        if (d != dist_.end() && d->second < level) continue;
        const NodeId via = level == 1 ? w : next_hop_.at(u);
        if (d == dist_.end()) {
          dist_[w] = level;
          next_hop_[w] = via;
          next_frontier.insert(w);
        } else if (d->second == level && via < next_hop_[w]) {
          next_hop_[w] = via;
        }
      }
    }
    frontier.assign(next_frontier.begin(), next_frontier.end());
  }
  next_hop_.erase(self);
}

void FsrProtocol::send_data(DataPacket pkt) {
  if (pkt.final_dst == env_.self()) {
    env_.deliver_to_app(pkt);
    return;
  }
  auto it = next_hop_.find(pkt.final_dst);
  if (it == next_hop_.end()) {
    env_.drop_data(pkt, DropReason::kNoRoute);
    return;
  }
  env_.send_frame(make_data_frame(env_.self(), it->second, std::move(pkt)));
}

void FsrProtocol::on_frame(const Frame& f, NodeId from) {
  if (const auto* update = std::get_if<fsr_msg::Update>(&f.payload)) {
    process_update(*update, from);
    return;
  }
  if (const auto* data = std::get_if<DataPacket>(&f.payload)) {
    DataPacket pkt = *data;
    ++pkt.hops_traveled;
    if (pkt.final_dst == env_.self()) {
      env_.deliver_to_app(pkt);
      return;
    }
    if (pkt.hops_traveled >= kMaxDataHops) {
      env_.drop_data(pkt, DropReason::kHopLimit);
      return;
    }
    send_data(std::move(pkt));
  }
}

void FsrProtocol::on_tx_failed(const Frame& f, NodeId next_hop) {
  (void)next_hop;
  // Proactive protocol, no triggered maintenance: the periodic exchange will
  // catch up with the topology; the packet itself is lost.
  if (const auto* data = std::get_if<DataPacket>(&f.payload))
    env_.drop_data(*data, DropReason::kRetryExhausted);
}

}  // namespace fsr
}  // namespace adhocsim
