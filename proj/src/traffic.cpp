#include "adhocsim/traffic.hpp"

#include <stdexcept>

#include "adhocsim/rng.hpp"

namespace adhocsim {

void CbrFlow::validate() const {
  if (src == dst) throw std::invalid_argument("flow: src must differ from dst");
  if (interval_s <= 0.0) throw std::invalid_argument("flow: interval must be positive");
  if (payload_bytes == 0) throw std::invalid_argument("flow: payload must be positive");
  if (start < 0.0) throw std::invalid_argument("flow: start must be >= 0");
}

std::vector<CbrFlow> spawn_flows(int count, int node_count, uint64_t master_seed,
                                 SimTime stop, double interval_s,
                                 uint32_t payload_bytes, double stagger_window_s) {
  if (count < 0) throw std::invalid_argument("spawn_flows: count must be >= 0");
  const int64_t pairs = static_cast<int64_t>(node_count) * (node_count - 1);
  if (count > pairs)
    throw std::invalid_argument("spawn_flows: count exceeds available (src,dst) pairs");

  RngStream rng(master_seed, Subsystem::kTraffic, 0);
  std::vector<CbrFlow> flows;
  flows.reserve(count);
  // Ordered pairs indexed 0..n(n-1)-1; Fisher-Yates over a lazily-identity
  // index map keeps the draw O(count) without materializing all pairs.
  std::vector<int64_t> drawn;
  drawn.reserve(count);
  for (int i = 0; i < count; ++i) {
    for (;;) {
      const int64_t pick = static_cast<int64_t>(
          rng.u01() * static_cast<double>(pairs));
      bool dup = false;
      for (int64_t d : drawn)
        if (d == pick) { dup = true; break; }
      if (!dup) {
        drawn.push_back(pick);
        break;
      }
    }
    const NodeId src = static_cast<NodeId>(drawn.back() / (node_count - 1));
    NodeId dst = static_cast<NodeId>(drawn.back() % (node_count - 1));
    if (dst >= src) ++dst;
    CbrFlow f;
    f.src = src;
    f.dst = dst;
    f.start = rng.uniform(0.0, stagger_window_s);
    f.interval_s = interval_s;
    f.payload_bytes = payload_bytes;
    f.stop = stop;
    f.validate();
    flows.push_back(f);
  }
  return flows;
}

}  // namespace adhocsim
