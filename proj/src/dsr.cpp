#include "adhocsim/dsr.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace adhocsim {

DsrConfig DsrConfig::standard() { return DsrConfig{}; }

DsrConfig DsrConfig::mod() {
  DsrConfig c;
  c.cache_capacity = 256;  // one fourth of the default 1024
  return c;
}

void DsrConfig::validate() const {
  if (cache_capacity < 1) throw std::invalid_argument("dsr: cache_capacity must be >= 1");
  if (max_salvage < 0) throw std::invalid_argument("dsr: max_salvage must be >= 0");
  if (discovery_timeout_s <= 0.0 || discovery_timeout_max_s < discovery_timeout_s)
    throw std::invalid_argument("dsr: bad discovery timeouts");
  if (send_buffer_timeout_s <= 0.0)
    throw std::invalid_argument("dsr: send_buffer_timeout must be positive");
}

namespace dsr {

namespace {

constexpr int kMaxDataHops = 64;

bool has_repeated_node(const std::vector<NodeId>& route) {
  std::set<NodeId> seen;
  for (NodeId n : route)
    if (!seen.insert(n).second) return true;
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// RouteCache

RouteCache::RouteCache(size_t capacity) : capacity_(capacity) {
  if (capacity_ < 1) throw std::invalid_argument("RouteCache: capacity must be >= 1");
}

RouteCache::InsertResult RouteCache::insert(std::vector<NodeId> route, SimTime now) {
  if (route.size() < 2 || has_repeated_node(route))
    return InsertResult::kRejectedLoop;
  for (Entry& e : entries_) {
    if (e.route == route) {
      e.last_used = now;
      e.order = next_order_++;
      return InsertResult::kRefreshed;
    }
  }
  if (entries_.size() >= capacity_) {
    auto victim = std::min_element(
        entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
          return a.last_used != b.last_used ? a.last_used < b.last_used
                                            : a.order < b.order;
        });
    entries_.erase(victim);
  }
  entries_.push_back(Entry{std::move(route), now, now, next_order_++});
  return InsertResult::kStored;
}

std::optional<std::vector<NodeId>> RouteCache::lookup(NodeId self, NodeId dest,
                                                      SimTime now) {
  Entry* best = nullptr;
  size_t best_from = 0, best_to = 0;
  for (Entry& e : entries_) {
    size_t from = e.route.size(), to = e.route.size();
    for (size_t i = 0; i < e.route.size(); ++i) {
      if (e.route[i] == self) from = i;
      if (e.route[i] == dest) to = i;
    }
    if (from >= to || to == e.route.size()) continue;
    const size_t hops = to - from;
    if (!best || hops < best_to - best_from ||
        (hops == best_to - best_from &&
         (e.last_used > best->last_used ||
          (e.last_used == best->last_used && e.order > best->order)))) {
      best = &e;
      best_from = from;
      best_to = to;
    }
  }
  if (!best) return std::nullopt;
  best->last_used = now;
  best->order = next_order_++;
  return std::vector<NodeId>(best->route.begin() + best_from,
                             best->route.begin() + best_to + 1);
}

void RouteCache::purge_link(NodeId u, NodeId v) {
  std::erase_if(entries_, [&](const Entry& e) {
    for (size_t i = 0; i + 1 < e.route.size(); ++i)
      if (e.route[i] == u && e.route[i + 1] == v) return true;
    return false;
  });
}

bool RouteCache::holds(const std::vector<NodeId>& route) const {
  for (const Entry& e : entries_)
    if (e.route == route) return true;
  return false;
}

bool RouteCache::any_contains_link(NodeId u, NodeId v) const {
  for (const Entry& e : entries_)
    for (size_t i = 0; i + 1 < e.route.size(); ++i)
      if (e.route[i] == u && e.route[i + 1] == v) return true;
  return false;
}

// ---------------------------------------------------------------------------
// DsrProtocol

DsrProtocol::DsrProtocol(DsrConfig cfg, RoutingEnv& env)
    : cfg_(cfg), env_(env), cache_(cfg.cache_capacity) {
  cfg_.validate();
}

void DsrProtocol::send_data(DataPacket pkt) {
  if (pkt.final_dst == env_.self()) {
    env_.deliver_to_app(pkt);
    return;
  }
  if (auto route = cache_.lookup(env_.self(), pkt.final_dst, env_.now())) {
    pkt.source_route = std::move(*route);
    pkt.sr_index = 0;
    send_along(std::move(pkt));
    return;
  }
  const NodeId target = pkt.final_dst;
  buffer_packet(std::move(pkt));
  if (!discoveries_.count(target)) start_discovery(target);
}

void DsrProtocol::send_along(DataPacket pkt) {
  const NodeId next = pkt.source_route[pkt.sr_index + 1];
  env_.send_frame(make_data_frame(env_.self(), next, std::move(pkt)));
}

void DsrProtocol::buffer_packet(DataPacket pkt) {
  auto& q = send_buffer_[pkt.final_dst];
  if (q.size() >= cfg_.send_buffer_capacity) {
    env_.drop_data(q.front().pkt, DropReason::kBufferOverflow);
    q.pop_front();
  }
  q.push_back(Buffered{std::move(pkt), env_.now() + cfg_.send_buffer_timeout_s});
  if (!sweep_scheduled_) {
    sweep_scheduled_ = true;
    env_.schedule(env_.now() + 1.0, EventKind::kTimerExpiry, [this] { sweep_buffer(); });
  }
}

void DsrProtocol::sweep_buffer() {
  sweep_scheduled_ = false;
  const SimTime now = env_.now();
  for (auto it = send_buffer_.begin(); it != send_buffer_.end();) {
    auto& q = it->second;
    while (!q.empty() && q.front().expires <= now) {
      env_.drop_data(q.front().pkt, DropReason::kBufferExpired);
      q.pop_front();
    }
    if (q.empty()) {
      // Nothing pending: any running discovery for this target stops too.
      auto d = discoveries_.find(it->first);
      if (d != discoveries_.end()) {
        env_.cancel(d->second.timer);
        discoveries_.erase(d);
      }
      it = send_buffer_.erase(it);
    } else {
      ++it;
    }
  }
  if (!send_buffer_.empty()) {
    sweep_scheduled_ = true;
    env_.schedule(now + 1.0, EventKind::kTimerExpiry, [this] { sweep_buffer(); });
  }
}

// ---------------------------------------------------------------------------
// Discovery

void DsrProtocol::start_discovery(NodeId target) {
  Discovery& d = discoveries_[target];
  d.timeout = cfg_.discovery_timeout_s;
  issue_rreq(target, d);
}

void DsrProtocol::issue_rreq(NodeId target, Discovery& d) {
  d.request_id = ++next_request_id_;
  dsr_msg::Rreq rreq;
  rreq.originator = env_.self();
  rreq.target = target;
  rreq.request_id = d.request_id;
  rreq.path = {env_.self()};
  env_.send_frame(make_control_frame(env_.self(), kBroadcast, rreq));
  d.timer = env_.schedule(env_.now() + d.timeout, EventKind::kTimerExpiry,
                          [this, target] { discovery_timeout(target); });
}

void DsrProtocol::discovery_timeout(NodeId target) {
  auto it = discoveries_.find(target);
  if (it == discoveries_.end()) return;
  auto buf = send_buffer_.find(target);
  if (buf == send_buffer_.end() || buf->second.empty()) {
    discoveries_.erase(it);
    return;
  }
  // Retry with exponential backoff while packets are still pending; the
  // 30 s send-buffer expiry bounds the total effort.
  it->second.timeout = std::min(2.0 * it->second.timeout, cfg_.discovery_timeout_max_s);
  issue_rreq(target, it->second);
}

void DsrProtocol::flush_buffer(NodeId target) {
  auto d = discoveries_.find(target);
  if (d != discoveries_.end()) {
    env_.cancel(d->second.timer);
    discoveries_.erase(d);
  }
  auto it = send_buffer_.find(target);
  if (it == send_buffer_.end()) return;
  std::deque<Buffered> pending = std::move(it->second);
  send_buffer_.erase(it);
  for (Buffered& b : pending) send_data(std::move(b.pkt));
}

// ---------------------------------------------------------------------------
// Frame handling

void DsrProtocol::on_frame(const Frame& f, NodeId from) {
  if (const auto* rreq = std::get_if<dsr_msg::Rreq>(&f.payload)) {
    handle_rreq(*rreq, from);
  } else if (const auto* rrep = std::get_if<dsr_msg::Rrep>(&f.payload)) {
    handle_rrep(*rrep, from);
  } else if (const auto* rerr = std::get_if<dsr_msg::Rerr>(&f.payload)) {
    handle_rerr(*rerr, from);
  } else if (const auto* data = std::get_if<DataPacket>(&f.payload)) {
    handle_data(*data, from);
  }
}

void DsrProtocol::handle_rreq(dsr_msg::Rreq rreq, NodeId from) {
  (void)from;
  if (rreq.originator == env_.self()) return;
  if (std::find(rreq.path.begin(), rreq.path.end(), env_.self()) != rreq.path.end())
    return;
  const auto key = std::make_pair(rreq.originator, rreq.request_id);
  auto seen = seen_rreqs_.find(key);
  if (seen != seen_rreqs_.end() && seen->second > env_.now()) return;
  seen_rreqs_[key] = env_.now() + 30.0;
  if (seen_rreqs_.size() > 4096) {
    std::erase_if(seen_rreqs_, [now = env_.now()](const auto& kv) {
      return kv.second <= now;
    });
  }

  // The accumulated path, reversed, is a usable route back to the originator.
  {
    std::vector<NodeId> back{env_.self()};
    back.insert(back.end(), rreq.path.rbegin(), rreq.path.rend());
    cache_.insert(std::move(back), env_.now());
  }

  if (rreq.target == env_.self()) {
    dsr_msg::Rrep rrep;
    rrep.requester = rreq.originator;
    rrep.route = rreq.path;
    rrep.route.push_back(env_.self());
    const NodeId back = rreq.path.back();
    const SimTime at = env_.now() + env_.rng().uniform(0.0, cfg_.rrep_jitter_s);
    env_.schedule(at, EventKind::kTimerExpiry, [this, rrep, back] {
      env_.send_frame(make_control_frame(env_.self(), back, rrep));
    });
    return;
  }

  if (cfg_.reply_from_cache) {
    if (auto cached = cache_.lookup(env_.self(), rreq.target, env_.now())) {
      std::vector<NodeId> splice = rreq.path;
      splice.push_back(env_.self());
      splice.insert(splice.end(), cached->begin() + 1, cached->end());
      if (!has_repeated_node(splice)) {
        dsr_msg::Rrep rrep;
        rrep.requester = rreq.originator;
        rrep.route = std::move(splice);
        const NodeId back = rreq.path.back();
        const SimTime at = env_.now() + env_.rng().uniform(0.0, cfg_.rrep_jitter_s);
        env_.schedule(at, EventKind::kTimerExpiry, [this, rrep, back] {
          env_.send_frame(make_control_frame(env_.self(), back, rrep));
        });
        return;
      }
    }
  }

  rreq.path.push_back(env_.self());
  const SimTime at = env_.now() + cfg_.flood.forward_delay(env_.self(), env_.rng());
  env_.schedule(at, EventKind::kTimerExpiry, [this, rreq] {
    env_.send_frame(make_control_frame(env_.self(), kBroadcast, rreq));
  });
}

void DsrProtocol::handle_rrep(const dsr_msg::Rrep& rrep, NodeId from) {
  (void)from;
  cache_.insert(rrep.route, env_.now());
  if (rrep.requester == env_.self()) {
    flush_buffer(rrep.route.back());
    return;
  }
  // Relay toward the requester along the reverse of the carried route.
  auto it = std::find(rrep.route.begin(), rrep.route.end(), env_.self());
  if (it == rrep.route.end() || it == rrep.route.begin()) return;
  env_.send_frame(make_control_frame(env_.self(), *(it - 1), rrep));
}

void DsrProtocol::handle_rerr(dsr_msg::Rerr rerr, NodeId from) {
  (void)from;
  cache_.purge_link(rerr.broken_from, rerr.broken_to);
  if (env_.self() == rerr.source) return;
  ++rerr.index;  // our position in the travel path
  if (rerr.index + 1 >= rerr.route.size()) return;
  if (rerr.route[rerr.index] != env_.self()) return;  // header out of sync
  env_.send_frame(make_control_frame(env_.self(), rerr.route[rerr.index + 1], rerr));
}

void DsrProtocol::handle_data(DataPacket pkt, NodeId from) {
  (void)from;
  ++pkt.hops_traveled;
  if (pkt.final_dst == env_.self()) {
    env_.deliver_to_app(pkt);
    return;
  }
  if (pkt.hops_traveled >= kMaxDataHops) {
    env_.drop_data(pkt, DropReason::kHopLimit);
    return;
  }
  // Forwarders see the whole route; remember it.
  cache_.insert(pkt.source_route, env_.now());
  if (pkt.sr_index + 1 >= pkt.source_route.size() ||
      pkt.source_route[pkt.sr_index + 1] != env_.self()) {
    env_.drop_data(pkt, DropReason::kNoRoute);  // header out of sync
    return;
  }
  ++pkt.sr_index;
  send_along(std::move(pkt));
}

// ---------------------------------------------------------------------------
// Maintenance

void DsrProtocol::on_tx_failed(const Frame& f, NodeId next_hop) {
  cache_.purge_link(env_.self(), next_hop);
  if (const auto* data = std::get_if<DataPacket>(&f.payload)) {
    salvage(*data, next_hop);
  }
  // Lost control frames are not retried beyond the MAC's budget; a pending
  // discovery simply times out and reissues.
}

void DsrProtocol::send_rerr_to_source(const DataPacket& pkt, NodeId broken_next) {
  if (pkt.origin == env_.self()) return;
  dsr_msg::Rerr rerr;
  rerr.source = pkt.origin;
  rerr.broken_from = env_.self();
  rerr.broken_to = broken_next;
  rerr.route.assign(pkt.source_route.begin(),
                    pkt.source_route.begin() + pkt.sr_index + 1);
  std::reverse(rerr.route.begin(), rerr.route.end());
  rerr.index = 0;
  if (rerr.route.size() < 2) return;
  env_.send_frame(make_control_frame(env_.self(), rerr.route[1], rerr));
}

void DsrProtocol::salvage(DataPacket pkt, NodeId broken_next) {
  send_rerr_to_source(pkt, broken_next);
  if (pkt.salvage_count >= cfg_.max_salvage) {
    env_.drop_data(pkt, DropReason::kSalvageLimit);
    return;
  }
  auto route = cache_.lookup(env_.self(), pkt.final_dst, env_.now());
  if (!route) {
    env_.drop_data(pkt, DropReason::kRetryExhausted);
    return;
  }
  ++pkt.salvage_count;
  pkt.source_route = std::move(*route);
  pkt.sr_index = 0;
  send_along(std::move(pkt));
}

// ---------------------------------------------------------------------------
// Promiscuous operation

void DsrProtocol::on_overhear(const Frame& f, NodeId from) {
  if (!cfg_.promiscuous) return;
  if (const auto* rrep = std::get_if<dsr_msg::Rrep>(&f.payload)) {
    cache_.insert(rrep->route, env_.now());
    return;
  }
  const auto* data = std::get_if<DataPacket>(&f.payload);
  if (!data || data->source_route.empty()) return;
  cache_.insert(data->source_route, env_.now());
  if (!cfg_.gratuitous_rrep) return;

  // If we know a strictly shorter way from here, offer the source a spliced
  // route through ourselves.
  const auto& route = data->source_route;
  const size_t sender_idx = data->sr_index;
  if (sender_idx + 1 >= route.size()) return;
  if (std::find(route.begin(), route.end(), env_.self()) != route.end()) return;
  auto alt = cache_.lookup(env_.self(), data->final_dst, env_.now());
  if (!alt) return;
  const size_t proposal_hops = sender_idx + 1 + (alt->size() - 1);
  if (proposal_hops >= route.size() - 1) return;

  std::vector<NodeId> proposal(route.begin(), route.begin() + sender_idx + 1);
  proposal.push_back(env_.self());
  proposal.insert(proposal.end(), alt->begin() + 1, alt->end());
  if (has_repeated_node(proposal)) return;

  dsr_msg::Rrep grat;
  grat.requester = data->origin;
  grat.route = std::move(proposal);
  grat.gratuitous = true;
  env_.send_frame(make_control_frame(env_.self(), from, grat));
}

}  // namespace dsr
}  // namespace adhocsim
