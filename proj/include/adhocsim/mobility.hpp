#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "adhocsim/rng.hpp"
#include "adhocsim/types.hpp"

namespace adhocsim {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Node position process. Implementations advance internal state lazily, so
/// queries must be non-decreasing in time (which holds for a single engine).
class MobilityModel {
 public:
  virtual ~MobilityModel() = default;

  virtual int node_count() const = 0;

  /// Exact position on the node's current constant-speed leg.
  /// Throws std::invalid_argument for unknown nodes.
  virtual Position position_at(NodeId id, SimTime t) const = 0;

  /// All nodes within Euclidean distance <= range of `id` (closed ball),
  /// excluding `id` itself. range must be positive.
  std::vector<NodeId> neighbors_within(NodeId id, double range, SimTime t) const;
};

/// Fixed positions; scripted tests may teleport nodes to force link breaks.
class StaticMobility final : public MobilityModel {
 public:
  explicit StaticMobility(std::vector<Position> positions)
      : positions_(std::move(positions)) {}

  int node_count() const override { return static_cast<int>(positions_.size()); }
  Position position_at(NodeId id, SimTime t) const override;

  void set_position(NodeId id, Position p);

 private:
  std::vector<Position> positions_;
};

/// Random waypoint over a rectangular field: pick a uniform destination, move
/// at constant speed, pause, repeat. Legs are generated lazily from the
/// per-node RNG substream, so trajectories depend only on (seed, node).
class RandomWaypointMobility final : public MobilityModel {
 public:
  RandomWaypointMobility(int nodes, double width, double height, double speed_mps,
                         double pause_s, uint64_t master_seed);

  int node_count() const override { return static_cast<int>(legs_.size()); }
  Position position_at(NodeId id, SimTime t) const override;

 private:
  struct Leg {
    Position from;
    Position to;
    SimTime depart;   // motion start (after pause)
    SimTime arrive;   // at destination
    mutable RngStream rng;
    Leg(Position f, RngStream r) : from(f), to(f), depart(0), arrive(0), rng(std::move(r)) {}
  };

  void advance(Leg& leg) const;

  double width_, height_, speed_, pause_;
  mutable std::vector<Leg> legs_;
};

struct HighwayConfig {
  double road_length = 1000.0;   // meters, wraparound ring
  int lanes_per_direction = 2;
  double lane_width = 4.0;
  double arrival_rate = 0.1;     // vehicles/second per lane (Poisson mode)
  double speed_mps = 20.0;
  double speed_jitter = 0.0;     // optional +-jitter, uniform per vehicle
};

struct VehicleArrival {
  int lane = 0;
  SimTime time = 0.0;
  double speed = 0.0;
};

/// Per-lane Poisson arrival schedule over [0, horizon): exponential
/// inter-arrival times of rate `arrival_rate`, independent substream per lane.
std::vector<VehicleArrival> spawn_vehicles(const HighwayConfig& cfg, double horizon,
                                           uint64_t master_seed);

/// Bidirectional multi-lane ring road. Forward lanes move in +x, reverse lanes
/// in -x; positions wrap modulo road_length. Construct either with an exact
/// vehicle count (scenario runs) or from a Poisson arrival schedule spanning
/// one traversal period, which is stationary after a warm-up of
/// road_length / speed.
class HighwayMobility final : public MobilityModel {
 public:
  static HighwayMobility fixed_count(const HighwayConfig& cfg, int vehicles,
                                     uint64_t master_seed);
  static HighwayMobility from_arrivals(const HighwayConfig& cfg,
                                       const std::vector<VehicleArrival>& arrivals);

  int node_count() const override { return static_cast<int>(vehicles_.size()); }
  Position position_at(NodeId id, SimTime t) const override;

  /// Longitudinal coordinate only (ignores lane offset); used by the segment
  /// occupancy validation.
  double x_at(NodeId id, SimTime t) const;

 private:
  struct Vehicle {
    int lane;
    bool reverse;
    double x0;
    SimTime t0;
    double speed;
  };

  explicit HighwayMobility(const HighwayConfig& cfg) : cfg_(cfg) {}
  double lane_y(int lane) const;

  HighwayConfig cfg_;
  std::vector<Vehicle> vehicles_;
};

void validate_highway(const HighwayConfig& cfg);

}  // namespace adhocsim
