#pragma once

#include <cstdint>
#include <random>

#include "adhocsim/types.hpp"

namespace adhocsim {

/// Subsystem tags for RNG substream derivation. Each (subsystem, node) pair
/// owns an independent stream so that, e.g., adding a traffic flow never
/// perturbs mobility draws.
enum class Subsystem : uint64_t {
  kMobility = 1,
  kMac = 2,
  kPhy = 3,
  kRouting = 4,
  kTraffic = 5,
  kAnalytics = 6,
};

uint64_t substream_id(Subsystem s, NodeId node = 0);

/// Seeded random stream. Identical (master_seed, substream) always yields the
/// identical draw sequence; distribution sampling is hand-rolled on top of
/// mt19937_64 because the std:: distributions are implementation-defined.
class RngStream {
 public:
  RngStream(uint64_t master_seed, uint64_t substream);
  RngStream(uint64_t master_seed, Subsystem s, NodeId node)
      : RngStream(master_seed, substream_id(s, node)) {}

  /// Uniform in [0, 1) with 53-bit resolution.
  double u01();

  /// Uniform in [a, b).
  double uniform(double a, double b);

  /// Uniform integer in [0, n); n must be positive.
  uint32_t uniform_int(uint32_t n);

  /// Exponential with the given rate (mean 1/rate); rate must be positive.
  double exponential(double rate);

 private:
  std::mt19937_64 gen_;
};

}  // namespace adhocsim
