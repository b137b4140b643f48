#pragma once

#include <cstdint>

namespace adhocsim {

/// Simulation time in seconds. Clocks never run backwards; all times are
/// derived deterministically from config constants, so comparisons are exact.
using SimTime = double;

using NodeId = int32_t;

inline constexpr NodeId kBroadcast = -1;
inline constexpr NodeId kNoNode = -2;

}  // namespace adhocsim
