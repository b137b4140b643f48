#include "adhocsim/analytics.hpp"

#include <omp.h>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace adhocsim {
namespace analytics {

double poisson_pmf(double phi, int n) {
  if (phi < 0.0) throw std::invalid_argument("poisson_pmf: phi must be >= 0");
  if (n < 0) throw std::invalid_argument("poisson_pmf: n must be >= 0");
  if (phi == 0.0) return n == 0 ? 1.0 : 0.0;
  if (n <= 20) {
    double p = std::exp(-phi);
    for (int k = 1; k <= n; ++k) p *= phi / k;
    return p;
  }
  return std::exp(-phi + n * std::log(phi) - std::lgamma(n + 1.0));
}

double pgf(double phi, double z) {
  if (phi < 0.0) throw std::invalid_argument("pgf: phi must be >= 0");
  if (z < 0.0 || z > 1.0) throw std::invalid_argument("pgf: z must be in [0, 1]");
  return std::exp(-phi * (1.0 - z));
}

double p_nonempty(double phi) { return 1.0 - pgf(phi, 0.0); }

double steady_state_phi(double lambda, double speed, double seg_length) {
  if (lambda <= 0.0 || speed <= 0.0 || seg_length <= 0.0)
    throw std::invalid_argument("steady_state_phi: all inputs must be positive");
  return lambda * seg_length / speed;
}

double link_duration(const KinematicPair& pair) {
  if (pair.v1 <= 0.0 || pair.v2 <= 0.0)
    throw std::invalid_argument("link_duration: speeds must be positive");
  if (pair.range <= 0.0)
    throw std::invalid_argument("link_duration: range must be positive");
  const double contact = 2.0 * pair.range;
  if (pair.direction == Direction::kOpposite)
    return contact / (pair.v1 + pair.v2);
  const double rel = std::fabs(pair.v1 - pair.v2);
  if (rel == 0.0) return std::numeric_limits<double>::infinity();
  return contact / rel;
}

void SegmentModel::validate() const {
  if (seg_length <= 0.0)
    throw std::invalid_argument("segment: seg_length must be positive");
  if (phi < 0.0) throw std::invalid_argument("segment: phi must be >= 0");
}

OccupancyReport validate_occupancy(std::span<const PositionSample> trace,
                                   const SegmentModel& model, size_t min_samples) {
  model.validate();
  OccupancyReport rep;
  rep.expected_phi = model.phi;
  rep.samples = trace.size();
  if (trace.size() < min_samples || model.phi <= 0.0) {
    rep.status = OccupancyReport::Status::kInconclusive;
    rep.note = trace.empty() ? "empty trace" : "insufficient samples";
    return rep;
  }

  const double lo = model.seg_start;
  const double hi = model.seg_start + model.seg_length;
  std::vector<uint64_t> hist;
  double sum = 0.0, sumsq = 0.0;
  for (const PositionSample& s : trace) {
    int count = 0;
    for (double x : s.xs)
      if (x >= lo && x < hi) ++count;
    if (static_cast<size_t>(count) >= hist.size()) hist.resize(count + 1, 0);
    ++hist[count];
    sum += count;
    sumsq += static_cast<double>(count) * count;
  }
  const double n = static_cast<double>(trace.size());
  rep.empirical_mean = sum / n;
  rep.empirical_variance = sumsq / n - rep.empirical_mean * rep.empirical_mean;
  rep.variance_mean_ratio =
      rep.empirical_mean > 0.0 ? rep.empirical_variance / rep.empirical_mean
                               : 0.0;
  rep.histogram = std::move(hist);

  // Chi-square against Poisson(phi), pooling the tail below expectation 5.
  double chi = 0.0;
  int bins = 0;
  double tail_expected = n, tail_observed = n;
  for (size_t k = 0; k < rep.histogram.size(); ++k) {
    const double expected = n * poisson_pmf(model.phi, static_cast<int>(k));
    if (expected < 5.0) break;
    chi += (rep.histogram[k] - expected) * (rep.histogram[k] - expected) / expected;
    tail_expected -= expected;
    tail_observed -= static_cast<double>(rep.histogram[k]);
    ++bins;
  }
  if (tail_expected > 0.5) {
    chi += (tail_observed - tail_expected) * (tail_observed - tail_expected) /
           tail_expected;
    ++bins;
  }
  rep.chi_square = chi;
  rep.chi_bins = bins;

  const bool mean_ok =
      std::fabs(rep.empirical_mean - model.phi) <= 0.02 * model.phi;
  const bool ratio_ok =
      rep.variance_mean_ratio >= 0.9 && rep.variance_mean_ratio <= 1.1;
  rep.status = mean_ok && ratio_ok ? OccupancyReport::Status::kPass
                                   : OccupancyReport::Status::kFail;
  if (!mean_ok) rep.note = "empirical mean outside 2% of phi";
  else if (!ratio_ok) rep.note = "variance/mean outside [0.9, 1.1]";
  return rep;
}

std::vector<PositionSample> highway_occupancy_trace(const HighwayConfig& cfg,
                                                    size_t samples,
                                                    uint64_t master_seed,
                                                    bool parallel) {
  validate_highway(cfg);
  const double period = cfg.road_length / cfg.speed_mps;
  const SimTime observe = 2.0 * period;  // one period of arrivals + warm-up
  std::vector<PositionSample> trace(samples);

  HighwayConfig lane_cfg = cfg;
  lane_cfg.lanes_per_direction = 1;
  lane_cfg.speed_jitter = 0.0;  // single-speed lane is what the model covers

  const auto realize = [&](size_t i) {
    // Fresh substream per realization keeps samples independent and the
    // result invariant to the thread count.
    std::vector<VehicleArrival> arrivals =
        spawn_vehicles(lane_cfg, period, master_seed + i);
    std::erase_if(arrivals, [](const VehicleArrival& a) { return a.lane != 0; });
    const HighwayMobility road = HighwayMobility::from_arrivals(lane_cfg, arrivals);
    PositionSample s;
    s.t = observe;
    s.xs.reserve(arrivals.size());
    for (NodeId v = 0; v < road.node_count(); ++v) s.xs.push_back(road.x_at(v, observe));
    trace[i] = std::move(s);
  };

  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < static_cast<int64_t>(samples); ++i)
      realize(static_cast<size_t>(i));
  } else {
    for (size_t i = 0; i < samples; ++i) realize(i);
  }
  return trace;
}

std::vector<PositionSample> convoy_occupancy_trace(const HighwayConfig& cfg,
                                                   size_t samples) {
  validate_highway(cfg);
  // Vehicles pinned at exact spacing speed/lambda; the segment count is a
  // deterministic function of the rotation phase, nothing like Poisson.
  const double spacing = cfg.speed_mps / cfg.arrival_rate;
  const int vehicles = std::max(1, static_cast<int>(cfg.road_length / spacing));
  const double period = cfg.road_length / cfg.speed_mps;
  std::vector<PositionSample> trace(samples);
  for (size_t i = 0; i < samples; ++i) {
    const SimTime t = 2.0 * period + static_cast<double>(i) * period / 97.0;
    PositionSample s;
    s.t = t;
    for (int v = 0; v < vehicles; ++v) {
      double x = std::fmod(v * spacing + cfg.speed_mps * t, cfg.road_length);
      if (x < 0.0) x += cfg.road_length;
      s.xs.push_back(x);
    }
    trace[i] = std::move(s);
  }
  return trace;
}

}  // namespace analytics
}  // namespace adhocsim
