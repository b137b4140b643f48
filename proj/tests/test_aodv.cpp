#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "adhocsim/aodv.hpp"
#include "adhocsim/sim.hpp"
#include "sim_helpers.hpp"

using namespace adhocsim;
using namespace simtest;

namespace {

aodv::AodvProtocol& aodv_at(Simulation& sim, NodeId id) {
  return static_cast<aodv::AodvProtocol&>(sim.protocol(id));
}

struct TxCounts {
  int rreq_originations = 0;
  int rreq_total = 0;
  int rrep = 0;
  int grat_rrep = 0;
  int hello = 0;
  int rerr = 0;
};

Simulation::TxTap count_tap(TxCounts& c, NodeId originator = kNoNode) {
  return [&c, originator](NodeId, const Frame& f, int attempt) {
    if (attempt != 1) return;
    if (const auto* rreq = std::get_if<aodv_msg::Rreq>(&f.payload)) {
      ++c.rreq_total;
      if (rreq->hop_count == 0 &&
          (originator == kNoNode || rreq->originator == originator))
        ++c.rreq_originations;
    } else if (const auto* rrep = std::get_if<aodv_msg::Rrep>(&f.payload)) {
      if (rrep->is_hello) ++c.hello;
      else if (rrep->gratuitous) ++c.grat_rrep;
      else ++c.rrep;
    } else if (std::get_if<aodv_msg::Rerr>(&f.payload)) {
      ++c.rerr;
    }
  };
}

// Loop-freedom audit: toward any destination, following next hops must not
// decrease (dest_seq, -hop_count) lexicographically.
void audit_loop_freedom(Simulation& sim) {
  const int n = sim.node_count();
  for (NodeId u = 0; u < n; ++u) {
    const auto& routes = aodv_at(sim, u).routes();
    for (const auto& [dest, e] : routes) {
      if (e.state != aodv::RouteEntry::State::kValid) continue;
      if (e.next_hop == dest) continue;
      const auto& vr = aodv_at(sim, e.next_hop).routes();
      auto it = vr.find(dest);
      if (it == vr.end() || it->second.state != aodv::RouteEntry::State::kValid)
        continue;  // chain broken, nothing to compare
      const bool ok = it->second.dest_seq > e.dest_seq ||
                      (it->second.dest_seq == e.dest_seq &&
                       it->second.hop_count < e.hop_count);
      REQUIRE(ok);
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Expanding ring search

TEST_CASE("default ERS sequence is 1,3,5,7,35") {
  const AodvConfig cfg = AodvConfig::standard();
  CHECK(aodv::ers_ttl_sequence(cfg) == std::vector<int>{1, 3, 5, 7, 35});
  CHECK(aodv::next_ttl(std::nullopt, cfg) == 1);
  CHECK(aodv::next_ttl(1, cfg) == 3);
  CHECK(aodv::next_ttl(3, cfg) == 5);
  CHECK(aodv::next_ttl(5, cfg) == 7);
  CHECK(aodv::next_ttl(7, cfg) == 35);
  CHECK(aodv::next_ttl(35, cfg) == 35);  // repeats until retries run out
}

TEST_CASE("MOD preset sequence is 2,6,35") {
  const AodvConfig cfg = AodvConfig::mod();
  CHECK(cfg.ttl_start == 2);
  CHECK(cfg.ttl_increment == 4);
  CHECK(cfg.ttl_threshold == 9);
  CHECK(aodv::ers_ttl_sequence(cfg) == std::vector<int>{2, 6, 35});
}

TEST_CASE("degenerate ttl_start at the network diameter searches network-wide") {
  AodvConfig cfg = AodvConfig::standard();
  cfg.ttl_start = cfg.net_diameter;
  CHECK(aodv::ers_ttl_sequence(cfg) == std::vector<int>{35});
}

TEST_CASE("ERS sequences increase strictly up to the network diameter") {
  RngStream rng(5, 0);
  for (int i = 0; i < 200; ++i) {
    AodvConfig cfg = AodvConfig::standard();
    cfg.net_diameter = 10 + static_cast<int>(rng.uniform_int(40));
    cfg.ttl_threshold = 1 + static_cast<int>(rng.uniform_int(cfg.net_diameter - 1));
    cfg.ttl_start = 1 + static_cast<int>(rng.uniform_int(5));
    cfg.ttl_increment = 1 + static_cast<int>(rng.uniform_int(5));
    const auto seq = aodv::ers_ttl_sequence(cfg);
    for (size_t k = 1; k < seq.size(); ++k) REQUIRE(seq[k] > seq[k - 1]);
    REQUIRE(seq.back() == cfg.net_diameter);
  }
}

TEST_CASE("config validation rejects a threshold at or past the diameter") {
  AodvConfig cfg = AodvConfig::standard();
  cfg.ttl_threshold = cfg.net_diameter;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Discovery on scripted topologies

TEST_CASE("two-hop chain needs two origination rounds") {
  SimSetup setup = static_setup(aodv_oracle_config(), 1, 12.0);
  setup.flows = {flow(0, 2, 0.5, 10.0)};
  StaticSim s = make_static_sim(chain(3), std::move(setup));
  TxCounts counts;
  s->set_tx_tap(count_tap(counts, 0));
  s->run();
  CHECK(counts.rreq_originations == 2);  // TTL 1 misses, TTL 3 reaches
  CHECK(s->ledger().data_delivered() == s->ledger().data_sent());
  CHECK(aodv_at(*s.sim, 2).own_seq() > 0);  // destination bumped its seq
}

TEST_CASE("a direct neighbor is found within the first ring") {
  SimSetup setup = static_setup(aodv_oracle_config(), 1, 10.0);
  setup.flows = {flow(0, 1, 0.5, 8.0)};
  StaticSim s = make_static_sim(chain(2), std::move(setup));
  TxCounts counts;
  s->set_tx_tap(count_tap(counts, 0));
  s->run();
  CHECK(counts.rreq_originations == 1);
  CHECK(s->ledger().data_delivered() == s->ledger().data_sent());
}

TEST_CASE("unreachable destination: retries exhaust and packets drop") {
  AodvConfig cfg = AodvConfig::standard();  // node_traversal 40 ms keeps it quick
  cfg.hello_interval_s = 0.0;
  SimSetup setup = static_setup(cfg, 1, 15.0);
  setup.flows = {flow(0, 1, 0.5, 2.0)};
  StaticSim s = make_static_sim({{0, 0}, {1000, 0}}, std::move(setup));
  TxCounts counts;
  s->set_tx_tap(count_tap(counts, 0));
  s->run();
  // Escalation 1,3,5,7,35 plus rreq_retries=2 repeats at the diameter.
  CHECK(counts.rreq_originations == 7);
  CHECK(s->ledger().data_delivered() == 0);
  CHECK(s->ledger().drops(DropReason::kDiscoveryFailed) ==
        s->ledger().data_sent());
}

TEST_CASE("duplicate RREQs are never forwarded") {
  // Diamond: 0-1, 0-3, 1-3 in range; the destination 2 hangs off node 1.
  std::vector<Position> pos{{0, 0}, {200, 0}, {400, 0}, {100, 173}};
  AodvConfig cfg = aodv_oracle_config();
  cfg.ttl_start = 3;  // one flood reaches everything
  SimSetup setup = static_setup(cfg, 1, 10.0);
  setup.flows = {flow(0, 2, 0.5, 8.0)};
  StaticSim s = make_static_sim(std::move(pos), std::move(setup));
  TxCounts counts;
  s->set_tx_tap(count_tap(counts));
  s->run();
  // Originator + exactly one forward each from nodes 1 and 3; node 3's copy
  // of node 1's rebroadcast is a duplicate and dies quietly.
  CHECK(counts.rreq_total == 3);
  CHECK(s->ledger().data_delivered() == s->ledger().data_sent());
}

TEST_CASE("intermediate node with a fresh route replies; dest stays silent") {
  // 0-1-2 chain carries flow 0->2, so node 1 holds a fresh route to 2.
  // Node 3 (adjacent to 0 and 1? no - only to 0... see positions) asks for 2.
  std::vector<Position> pos{{200, 0}, {400, 0}, {600, 0}, {200, 200}};
  // ids: 0 at x=200 (chain head), 1 mid, 2 dest, 3 the late requester
  // distances: 3-0 = 200 (in range), 3-1 = 283, 3-2 = 447 (out of range).
  AodvConfig cfg = aodv_oracle_config();
  SimSetup setup = static_setup(cfg, 1, 25.0);
  setup.flows = {flow(0, 2, 0.5, 24.0, 0.1),   // keeps routes fresh at node 0,1
                 flow(3, 2, 12.0, 24.0, 0.25)};
  StaticSim s = make_static_sim(std::move(pos), std::move(setup));

  int rreps_from_dest = 0, grats = 0, rreq_rounds_from_3 = 0;
  s->set_tx_tap([&](NodeId sender, const Frame& f, int attempt) {
    if (attempt != 1) return;
    if (const auto* rrep = std::get_if<aodv_msg::Rrep>(&f.payload)) {
      if (rrep->gratuitous) ++grats;
      else if (!rrep->is_hello && sender == 2 && rrep->originator == 3)
        ++rreps_from_dest;
    } else if (const auto* rreq = std::get_if<aodv_msg::Rreq>(&f.payload)) {
      if (rreq->originator == 3 && rreq->hop_count == 0) ++rreq_rounds_from_3;
    }
  });
  s->run();
  CHECK(rreq_rounds_from_3 == 1);  // ring 1 sufficed via the intermediate
  CHECK(rreps_from_dest == 0);     // destination never answered node 3
  CHECK(grats >= 1);               // and the dest learned of 3 gratuitously
  CHECK(s->ledger().data_delivered() == s->ledger().data_sent());
}

// ---------------------------------------------------------------------------
// Route maintenance

TEST_CASE("break near the destination triggers local repair, not a source RERR") {
  // Chain 0-1-2-3 with dest 4 one hop past 3; node 5 gives the detour.
  std::vector<Position> pos{{0, 0},   {200, 0},   {400, 0},
                            {600, 0}, {800, 0},   {750, 150}};
  // 3-4: 200 in range; 3-5: 212 in range; 5-(800,0): 158 in range.
  SimSetup setup = static_setup(aodv_oracle_config(), 1, 40.0);
  setup.flows = {flow(0, 4, 0.5, 39.0, 0.1)};
  StaticSim s = make_static_sim(pos, std::move(setup));
  TxCounts counts;
  s->set_tx_tap(count_tap(counts));
  StaticMobility* world = s.world;
  // Break link 3-4 at t=15 but keep 4 reachable via 5.
  s->engine().schedule(15.0, EventKind::kTimerExpiry, kNoNode, [world] {
    world->set_position(4, Position{750, 390});
  });
  s->run();
  CHECK(counts.rerr == 0);  // repair succeeded quietly
  // Everything sent eventually arrives (late packets ride the repaired route).
  CHECK(s->ledger().data_delivered() == s->ledger().data_sent());
  CHECK(s->ledger().data_dropped() == 0);
}

TEST_CASE("break adjacent to the source: drop, rediscover, reroute") {
  // 0-1-2 plus a two-hop detour 0-3-4-2.
  std::vector<Position> pos{{0, 0}, {200, 0}, {400, 0}, {100, 173}, {300, 173}};
  SimSetup setup = static_setup(aodv_oracle_config(), 1, 40.0);
  setup.flows = {flow(0, 2, 0.5, 39.0, 0.1)};
  StaticSim s = make_static_sim(pos, std::move(setup));
  TxCounts counts;
  s->set_tx_tap(count_tap(counts, 0));
  StaticMobility* world = s.world;
  s->engine().schedule(15.0, EventKind::kTimerExpiry, kNoNode, [world] {
    world->set_position(1, Position{5000, 5000});
  });
  s->run();
  CHECK(counts.rreq_originations >= 2);  // initial discovery + rediscovery
  // Exactly the packet caught on the dead link may drop; the flow recovers.
  CHECK(s->ledger().data_dropped() <= 2);
  CHECK(s->ledger().data_delivered() >= s->ledger().data_sent() - 2);
  const auto& routes = aodv_at(*s.sim, 0).routes();
  auto it = routes.find(2);
  REQUIRE(it != routes.end());
  CHECK(it->second.next_hop == 3);  // rerouted over the detour
}

TEST_CASE("failed local repair propagates RERRs and the source rediscovers") {
  AodvConfig cfg = aodv_oracle_config();
  cfg.rreq_retries = 1;  // keep the repair phase short
  SimSetup setup = static_setup(cfg, 1, 40.0);
  setup.flows = {flow(0, 4, 0.5, 39.0, 0.1)};
  StaticSim s = make_static_sim(chain(5), std::move(setup));
  TxCounts counts;
  s->set_tx_tap(count_tap(counts));
  StaticMobility* world = s.world;
  s->engine().schedule(15.0, EventKind::kTimerExpiry, kNoNode, [world] {
    world->set_position(4, Position{9000, 9000});
  });

  int rreqs_from_source_late = 0;
  Simulation* simp = s.sim.get();
  s->set_tx_tap([&](NodeId, const Frame& f, int attempt) {
    count_tap(counts)(kNoNode, f, attempt);
    if (attempt != 1) return;
    if (const auto* rreq = std::get_if<aodv_msg::Rreq>(&f.payload))
      if (rreq->originator == 0 && rreq->hop_count == 0 && simp->engine().now() > 15.0)
        ++rreqs_from_source_late;
  });
  s->run();
  CHECK(counts.rerr >= 3);               // 3 -> 2 -> 1 -> 0 chain
  CHECK(rreqs_from_source_late >= 1);    // source went looking again
  CHECK(s->ledger().drops(DropReason::kDiscoveryFailed) > 0);  // repair buffer
}

// ---------------------------------------------------------------------------
// Hello / neighbor sensing

TEST_CASE("idle nodes with no active routes stay silent") {
  AodvConfig cfg = AodvConfig::standard();  // hellos enabled
  SimSetup setup = static_setup(cfg, 1, 10.0);
  StaticSim s = make_static_sim(chain(2), std::move(setup));
  s->run();
  CHECK(s->ledger().control_tx() == 0);
}

TEST_CASE("hellos flow on active routes and count as control transmissions") {
  AodvConfig cfg = aodv_oracle_config(/*hello=*/true);
  cfg.hello_interval_s = 1.0;
  SimSetup setup = static_setup(cfg, 1, 12.0);
  setup.flows = {flow(0, 1, 0.5, 11.0, 0.1)};
  StaticSim s = make_static_sim(chain(2), std::move(setup));
  TxCounts counts;
  s->set_tx_tap(count_tap(counts));
  s->run();
  CHECK(counts.hello >= 8);
  // HELLOs are part of the routing load.
  CHECK(s->ledger().control_tx() >=
        static_cast<uint64_t>(counts.hello));
}

TEST_CASE("a silent neighbor is declared broken after allowed_hello_loss") {
  AodvConfig cfg = aodv_oracle_config(/*hello=*/true);
  cfg.hello_interval_s = 1.0;
  cfg.allowed_hello_loss = 2;
  cfg.active_route_timeout_s = 30.0;  // expiry must not mask hello detection
  SimSetup setup = static_setup(cfg, 1, 14.0);
  setup.flows = {flow(0, 1, 0.5, 5.0, 0.1)};  // traffic stops at t=5
  StaticSim s = make_static_sim(chain(2), std::move(setup));
  StaticMobility* world = s.world;
  s->engine().schedule(6.0, EventKind::kTimerExpiry, kNoNode, [world] {
    world->set_position(1, Position{5000, 0});
  });
  s->run();
  CHECK_FALSE(aodv_at(*s.sim, 0).has_valid_route(1));
}

// ---------------------------------------------------------------------------
// Properties

TEST_CASE("loop freedom holds at sampled instants of a mobile scenario") {
  SimSetup setup;
  setup.seed = 77;
  setup.sim_time = 60.0;
  setup.channel = ChannelModel::unit_disk(250.0);
  setup.protocol = AodvConfig::standard();
  setup.flows = spawn_flows(5, 20, 77, 60.0, 0.1);
  auto mob = std::make_unique<RandomWaypointMobility>(20, 1000.0, 1000.0, 15.0,
                                                      0.0, 77);
  Simulation sim(std::move(setup), std::move(mob));
  for (double t = 2.0; t < 60.0; t += 2.0)
    sim.engine().schedule(t, EventKind::kTimerExpiry, kNoNode,
                          [&sim] { audit_loop_freedom(sim); });
  sim.run();
  CHECK(sim.ledger().data_sent() > 0);
}

TEST_CASE("static oracle: discovered hop counts equal BFS shortest paths") {
  const auto pos = random_connected_topology(15, 700.0, kRange, 42);
  const auto hops = bfs_hops(pos, kRange);
  SimSetup setup = static_setup(aodv_oracle_config(), 9, 30.0);
  setup.flows = {flow(0, 14, 0.5, 28.0), flow(7, 3, 0.5, 28.0)};
  StaticSim s = make_static_sim(pos, std::move(setup));
  s->run();
  REQUIRE(s->ledger().data_delivered() == s->ledger().data_sent());
  for (const LatencyRecord& r : s->ledger().latency_records())
    REQUIRE(r.hops == hops[r.origin][r.final_dst]);
}
