#pragma once

// Shared scaffolding for protocol and harness tests: scripted static
// topologies, BFS oracles over the unit-disk graph, and canned setups with
// deterministic flood scheduling (see FloodTiming::slotted_oracle()).

#include <algorithm>
#include <memory>
#include <queue>
#include <vector>

#include "adhocsim/rng.hpp"
#include "adhocsim/sim.hpp"

namespace simtest {

using namespace adhocsim;

inline constexpr double kRange = 250.0;

/// Hop-count matrix of the unit-disk graph (closed ball, radius `range`);
/// -1 marks unreachable pairs. Independent of any protocol code.
inline std::vector<std::vector<int>> bfs_hops(const std::vector<Position>& pos,
                                              double range) {
  const int n = static_cast<int>(pos.size());
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    dist[s][s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v = 0; v < n; ++v) {
        if (dist[s][v] != -1 || v == u) continue;
        if (distance(pos[u], pos[v]) <= range) {
          dist[s][v] = dist[s][u] + 1;
          q.push(v);
        }
      }
    }
  }
  return dist;
}

inline bool connected(const std::vector<Position>& pos, double range) {
  const auto d = bfs_hops(pos, range);
  for (int v = 0; v < static_cast<int>(pos.size()); ++v)
    if (d[0][v] < 0) return false;
  return true;
}

inline int graph_diameter(const std::vector<Position>& pos, double range) {
  const auto d = bfs_hops(pos, range);
  int diam = 0;
  for (const auto& row : d)
    for (int v : row) diam = std::max(diam, v);
  return diam;
}

/// Random connected topology in a square field; redraws until connected.
inline std::vector<Position> random_connected_topology(int nodes, double field,
                                                       double range,
                                                       uint64_t seed) {
  RngStream rng(seed, Subsystem::kAnalytics, 0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Position> pos;
    pos.reserve(nodes);
    for (int i = 0; i < nodes; ++i)
      pos.push_back(Position{rng.uniform(0.0, field), rng.uniform(0.0, field)});
    if (connected(pos, range)) return pos;
  }
  throw std::runtime_error("random_connected_topology: no connected draw");
}

/// Horizontal chain with the given hop spacing.
inline std::vector<Position> chain(int nodes, double spacing = 200.0) {
  std::vector<Position> pos;
  for (int i = 0; i < nodes; ++i)
    pos.push_back(Position{spacing * i, 0.0});
  return pos;
}

struct StaticSim {
  std::unique_ptr<Simulation> sim;
  StaticMobility* world = nullptr;  // owned by sim

  Simulation* operator->() { return sim.get(); }
  Simulation& operator*() { return *sim; }
};

/// Static-topology simulation over a perfect unit-disk channel.
inline StaticSim make_static_sim(std::vector<Position> positions, SimSetup setup) {
  auto mob = std::make_unique<StaticMobility>(std::move(positions));
  StaticSim s;
  s.world = mob.get();
  s.sim = std::make_unique<Simulation>(std::move(setup), std::move(mob));
  return s;
}

/// AODV tuned for scripted oracle runs: deterministic slotted floods, ring
/// timeouts sized for the slotted per-hop delay, hellos off by default.
inline AodvConfig aodv_oracle_config(bool hello = false) {
  AodvConfig c = AodvConfig::standard();
  c.flood = FloodTiming::slotted_oracle();
  c.node_traversal_s = 0.35;
  if (!hello) c.hello_interval_s = 0.0;
  return c;
}

inline DsrConfig dsr_oracle_config() {
  DsrConfig c = DsrConfig::standard();
  c.flood = FloodTiming::slotted_oracle();
  c.discovery_timeout_s = 2.0;  // covers the slotted flood round trip
  c.promiscuous = false;        // overheard-subpath shortcuts are not BFS-minimal
  return c;
}

inline SimSetup static_setup(ProtocolConfig protocol, uint64_t seed = 1,
                             SimTime sim_time = 60.0) {
  SimSetup s;
  s.seed = seed;
  s.sim_time = sim_time;
  s.warmup = 0.0;
  s.channel = ChannelModel::unit_disk(kRange);
  s.protocol = std::move(protocol);
  return s;
}

inline CbrFlow flow(NodeId src, NodeId dst, SimTime start, SimTime stop,
                    double interval = 0.25) {
  CbrFlow f;
  f.src = src;
  f.dst = dst;
  f.start = start;
  f.stop = stop;
  f.interval_s = interval;
  return f;
}

}  // namespace simtest
