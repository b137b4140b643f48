#include "adhocsim/mobility.hpp"

#include <stdexcept>
#include <string>

namespace adhocsim {

std::vector<NodeId> MobilityModel::neighbors_within(NodeId id, double range,
                                                    SimTime t) const {
  if (range <= 0.0)
    throw std::invalid_argument("neighbors_within: range must be positive");
  const Position me = position_at(id, t);
  std::vector<NodeId> out;
  const int n = node_count();
  for (NodeId other = 0; other < n; ++other) {
    if (other == id) continue;
    if (distance(me, position_at(other, t)) <= range) out.push_back(other);
  }
  return out;
}

Position StaticMobility::position_at(NodeId id, SimTime) const {
  if (id < 0 || id >= node_count())
    throw std::invalid_argument("position_at: unknown node " + std::to_string(id));
  return positions_[id];
}

void StaticMobility::set_position(NodeId id, Position p) {
  if (id < 0 || id >= node_count())
    throw std::invalid_argument("set_position: unknown node " + std::to_string(id));
  positions_[id] = p;
}

RandomWaypointMobility::RandomWaypointMobility(int nodes, double width, double height,
                                               double speed_mps, double pause_s,
                                               uint64_t master_seed)
    : width_(width), height_(height), speed_(speed_mps), pause_(pause_s) {
  if (nodes < 1) throw std::invalid_argument("waypoint: need at least one node");
  if (width <= 0.0 || height <= 0.0)
    throw std::invalid_argument("waypoint: field dimensions must be positive");
  if (speed_mps <= 0.0)
    throw std::invalid_argument("waypoint: speed must be positive");
  if (pause_s < 0.0) throw std::invalid_argument("waypoint: pause must be >= 0");
  legs_.reserve(nodes);
  for (NodeId i = 0; i < nodes; ++i) {
    RngStream rng(master_seed, Subsystem::kMobility, i);
    Position start{rng.uniform(0.0, width), rng.uniform(0.0, height)};
    legs_.emplace_back(start, std::move(rng));
    Leg& leg = legs_.back();
    // First leg departs immediately; arrive == depart marks "draw next".
    leg.depart = 0.0;
    leg.arrive = 0.0;
  }
}

void RandomWaypointMobility::advance(Leg& leg) const {
  leg.from = leg.to;
  leg.to = Position{leg.rng.uniform(0.0, width_), leg.rng.uniform(0.0, height_)};
  leg.depart = leg.arrive + pause_;
  leg.arrive = leg.depart + distance(leg.from, leg.to) / speed_;
}

Position RandomWaypointMobility::position_at(NodeId id, SimTime t) const {
  if (id < 0 || id >= node_count())
    throw std::invalid_argument("position_at: unknown node " + std::to_string(id));
  Leg& leg = legs_[id];
  while (leg.arrive + pause_ < t) advance(leg);
  if (t <= leg.depart) return leg.from;
  if (t >= leg.arrive) return leg.to;
  const double f = (t - leg.depart) / (leg.arrive - leg.depart);
  return Position{leg.from.x + f * (leg.to.x - leg.from.x),
                  leg.from.y + f * (leg.to.y - leg.from.y)};
}

void validate_highway(const HighwayConfig& cfg) {
  if (cfg.road_length <= 0.0)
    throw std::invalid_argument("highway: road_length must be positive");
  if (cfg.lanes_per_direction < 1)
    throw std::invalid_argument("highway: need at least one lane per direction");
  if (cfg.arrival_rate <= 0.0)
    throw std::invalid_argument("highway: arrival_rate must be positive");
  if (cfg.speed_mps <= 0.0)
    throw std::invalid_argument("highway: speed must be positive");
  if (cfg.speed_jitter < 0.0 || cfg.speed_jitter >= cfg.speed_mps)
    throw std::invalid_argument("highway: speed_jitter must be in [0, speed)");
}

std::vector<VehicleArrival> spawn_vehicles(const HighwayConfig& cfg, double horizon,
                                           uint64_t master_seed) {
  validate_highway(cfg);
  if (horizon <= 0.0) throw std::invalid_argument("spawn_vehicles: horizon must be positive");
  std::vector<VehicleArrival> out;
  const int lanes = 2 * cfg.lanes_per_direction;
  for (int lane = 0; lane < lanes; ++lane) {
    RngStream rng(master_seed, Subsystem::kMobility, lane);
    SimTime t = 0.0;
    for (;;) {
      t += rng.exponential(cfg.arrival_rate);
      if (t >= horizon) break;
      double speed = cfg.speed_mps;
      if (cfg.speed_jitter > 0.0)
        speed += rng.uniform(-cfg.speed_jitter, cfg.speed_jitter);
      out.push_back(VehicleArrival{lane, t, speed});
    }
  }
  return out;
}

HighwayMobility HighwayMobility::fixed_count(const HighwayConfig& cfg, int vehicles,
                                             uint64_t master_seed) {
  validate_highway(cfg);
  if (vehicles < 1) throw std::invalid_argument("highway: need at least one vehicle");
  HighwayMobility m(cfg);
  const int lanes = 2 * cfg.lanes_per_direction;
  m.vehicles_.reserve(vehicles);
  for (NodeId i = 0; i < vehicles; ++i) {
    RngStream rng(master_seed, Subsystem::kMobility, i);
    const int lane = static_cast<int>(i) % lanes;
    double speed = cfg.speed_mps;
    if (cfg.speed_jitter > 0.0)
      speed += rng.uniform(-cfg.speed_jitter, cfg.speed_jitter);
    m.vehicles_.push_back(Vehicle{lane, lane >= cfg.lanes_per_direction,
                                  rng.uniform(0.0, cfg.road_length), 0.0, speed});
  }
  return m;
}

HighwayMobility HighwayMobility::from_arrivals(const HighwayConfig& cfg,
                                               const std::vector<VehicleArrival>& arrivals) {
  validate_highway(cfg);
  HighwayMobility m(cfg);
  m.vehicles_.reserve(arrivals.size());
  for (const VehicleArrival& a : arrivals) {
    const bool reverse = a.lane >= cfg.lanes_per_direction;
    // Forward traffic enters at x=0, reverse traffic at the far end.
    m.vehicles_.push_back(
        Vehicle{a.lane, reverse, reverse ? cfg.road_length : 0.0, a.time, a.speed});
  }
  return m;
}

double HighwayMobility::lane_y(int lane) const {
  const int l = cfg_.lanes_per_direction;
  if (lane < l) return cfg_.lane_width * (0.5 + lane);
  return -cfg_.lane_width * (0.5 + (lane - l));
}

double HighwayMobility::x_at(NodeId id, SimTime t) const {
  if (id < 0 || id >= node_count())
    throw std::invalid_argument("x_at: unknown node " + std::to_string(id));
  const Vehicle& v = vehicles_[id];
  if (t < v.t0)
    throw std::invalid_argument("x_at: node " + std::to_string(id) +
                                " not yet on the road");
  const double dir = v.reverse ? -1.0 : 1.0;
  double x = std::fmod(v.x0 + dir * v.speed * (t - v.t0), cfg_.road_length);
  if (x < 0.0) x += cfg_.road_length;
  return x;
}

Position HighwayMobility::position_at(NodeId id, SimTime t) const {
  return Position{x_at(id, t), lane_y(vehicles_[id].lane)};
}

}  // namespace adhocsim
