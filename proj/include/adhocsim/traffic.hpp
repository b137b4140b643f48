#pragma once

#include <vector>

#include "adhocsim/types.hpp"

namespace adhocsim {

/// Constant-bit-rate UDP-like flow.
struct CbrFlow {
  NodeId src = kNoNode;
  NodeId dst = kNoNode;
  SimTime start = 0.0;
  double interval_s = 0.03;
  uint32_t payload_bytes = 512;
  SimTime stop = 0.0;  // exclusive; ticks fire while now < stop

  void validate() const;
};

/// Draws `count` distinct (src, dst) pairs uniformly without replacement and
/// staggers the starts uniformly over [0, stagger_window) to avoid
/// synchronized discovery storms. Deterministic in the seed.
std::vector<CbrFlow> spawn_flows(int count, int node_count, uint64_t master_seed,
                                 SimTime stop, double interval_s = 0.03,
                                 uint32_t payload_bytes = 512,
                                 double stagger_window_s = 10.0);

}  // namespace adhocsim
