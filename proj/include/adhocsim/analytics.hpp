#pragma once

#include <span>
#include <string>
#include <vector>

#include "adhocsim/mobility.hpp"
#include "adhocsim/types.hpp"

namespace adhocsim {
namespace analytics {

/// Poisson pmf e^-phi * phi^n / n!; evaluated in log space for large n.
double poisson_pmf(double phi, int n);

/// Probability generating function E[z^N] = e^{-phi(1-z)} for z in [0, 1].
double pgf(double phi, double z);

/// Probability that a segment with mean occupancy phi holds at least one
/// node: 1 - pgf(phi, 0). With phi = density * 2R this is the probability
/// that some node sits within communication range.
double p_nonempty(double phi);

/// Stationary mean occupancy of a road segment under constant-speed Poisson
/// flow: phi = lambda * seg_length / speed.
double steady_state_phi(double lambda, double speed, double seg_length);

enum class Direction { kSame, kOpposite };

struct KinematicPair {
  double v1 = 0.0;  // m/s, > 0
  double v2 = 0.0;
  Direction direction = Direction::kSame;
  double range = 250.0;  // meters, > 0
};

/// Time two vehicles stay within mutual range, measured from the instant
/// they enter it: 2R/|v1-v2| in the same direction (infinite for equal
/// speeds), 2R/(v1+v2) in opposite directions.
double link_duration(const KinematicPair& pair);

struct SegmentModel {
  double seg_start = 0.0;
  double seg_length = 400.0;
  double phi = 0.0;     // expected occupancy
  double lambda = 0.0;  // provenance only; phi drives the test
  double speed = 0.0;

  void validate() const;
};

/// Longitudinal positions of every on-road vehicle at one sampled instant.
struct PositionSample {
  SimTime t = 0.0;
  std::vector<double> xs;
};

struct OccupancyReport {
  enum class Status { kPass, kFail, kInconclusive };
  Status status = Status::kInconclusive;
  size_t samples = 0;
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;
  double variance_mean_ratio = 0.0;
  double expected_phi = 0.0;
  double chi_square = 0.0;
  int chi_bins = 0;
  std::vector<uint64_t> histogram;  // counts per occupancy n
  std::string note;
};

/// Compares per-sample segment occupancy against Poisson(phi). Pass iff the
/// empirical mean lies within 2% of phi and variance/mean is in [0.9, 1.1];
/// fewer than min_samples samples is inconclusive, not a failure.
OccupancyReport validate_occupancy(std::span<const PositionSample> trace,
                                   const SegmentModel& model,
                                   size_t min_samples = 100000);

/// Monte Carlo occupancy trace: each sample is an independent single-lane
/// highway realization (Poisson arrivals over one traversal period, wrapped)
/// observed one full period after warm-up. OpenMP-parallel over samples when
/// `parallel`; output is identical either way.
std::vector<PositionSample> highway_occupancy_trace(const HighwayConfig& cfg,
                                                    size_t samples,
                                                    uint64_t master_seed,
                                                    bool parallel = true);

/// Negative control: equally spaced convoy, same mean occupancy.
std::vector<PositionSample> convoy_occupancy_trace(const HighwayConfig& cfg,
                                                   size_t samples);

}  // namespace analytics
}  // namespace adhocsim
