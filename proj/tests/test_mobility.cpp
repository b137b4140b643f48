#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "adhocsim/mobility.hpp"

using namespace adhocsim;

TEST_CASE("static positions interpolate trivially and reject unknown nodes") {
  StaticMobility mob({{0, 0}, {100, 0}});
  CHECK(mob.position_at(1, 5.0).x == 100.0);
  CHECK_THROWS_AS(mob.position_at(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mob.position_at(-1, 0.0), std::invalid_argument);
}

TEST_CASE("constant-speed leg interpolates linearly") {
  // One node moving from (0,0) toward (100,0) at 10 m/s: exact midpoints.
  StaticMobility start({{0, 0}});
  // Use the highway model for a pure constant-velocity check.
  HighwayConfig hw;
  hw.road_length = 1000.0;
  hw.lanes_per_direction = 1;
  hw.speed_mps = 10.0;
  auto road = HighwayMobility::from_arrivals(hw, {{0, 0.0, 10.0}});
  CHECK(road.x_at(0, 0.0) == doctest::Approx(0.0));
  CHECK(road.x_at(0, 5.0) == doctest::Approx(50.0));
}

TEST_CASE("highway positions wrap around the ring") {
  HighwayConfig hw;
  hw.road_length = 1000.0;
  hw.lanes_per_direction = 1;
  hw.speed_mps = 20.0;
  auto road = HighwayMobility::from_arrivals(hw, {{0, 0.0, 20.0}});
  // x0 = 0, speed 20: at t = 49.5 -> 990; at t = 50.5 -> 10.
  CHECK(road.x_at(0, 49.5) == doctest::Approx(990.0));
  CHECK(road.x_at(0, 50.5) == doctest::Approx(10.0));
}

TEST_CASE("reverse lanes move in -x and wrap") {
  HighwayConfig hw;
  hw.road_length = 1000.0;
  hw.lanes_per_direction = 1;
  hw.speed_mps = 20.0;
  auto road = HighwayMobility::from_arrivals(hw, {{1, 0.0, 20.0}});  // lane 1 = reverse
  const double x0 = road.x_at(0, 0.0);
  const double x1 = road.x_at(0, 1.0);
  CHECK(std::fmod(x0 - x1 + 1000.0, 1000.0) == doctest::Approx(20.0));
  CHECK(road.position_at(0, 0.0).y < 0.0);
}

TEST_CASE("waypoint trajectories stay inside the field") {
  RandomWaypointMobility mob(10, 1000.0, 800.0, 15.0, 0.0, 99);
  for (double t = 0.0; t <= 2000.0; t += 17.0) {
    for (NodeId i = 0; i < 10; ++i) {
      const Position p = mob.position_at(i, t);
      REQUIRE(p.x >= 0.0);
      REQUIRE(p.x <= 1000.0);
      REQUIRE(p.y >= 0.0);
      REQUIRE(p.y <= 800.0);
    }
  }
}

TEST_CASE("waypoint trajectories are reproducible per seed") {
  RandomWaypointMobility a(5, 1000.0, 1000.0, 7.0, 0.0, 1234);
  RandomWaypointMobility b(5, 1000.0, 1000.0, 7.0, 0.0, 1234);
  RandomWaypointMobility c(5, 1000.0, 1000.0, 7.0, 0.0, 1235);
  bool any_differs = false;
  for (double t = 0.0; t < 500.0; t += 11.0) {
    for (NodeId i = 0; i < 5; ++i) {
      const Position pa = a.position_at(i, t);
      const Position pb = b.position_at(i, t);
      CHECK(pa.x == pb.x);
      CHECK(pa.y == pb.y);
      const Position pc = c.position_at(i, t);
      any_differs = any_differs || pa.x != pc.x || pa.y != pc.y;
    }
  }
  CHECK(any_differs);
}

TEST_CASE("zero or negative speed is rejected") {
  CHECK_THROWS_AS(RandomWaypointMobility(3, 100, 100, 0.0, 0.0, 1),
                  std::invalid_argument);
  HighwayConfig hw;
  hw.speed_mps = 0.0;
  CHECK_THROWS_AS(validate_highway(hw), std::invalid_argument);
}

TEST_CASE("poisson arrival schedule matches its analytic mean") {
  HighwayConfig hw;
  hw.arrival_rate = 0.1;
  hw.lanes_per_direction = 1;
  hw.speed_mps = 20.0;
  const auto arrivals = spawn_vehicles(hw, 1000.0, 7);
  size_t lane0 = 0;
  for (const auto& a : arrivals) lane0 += a.lane == 0;
  // E = lambda*T = 100, sigma = 10; |N - 100| < 30 at 3 sigma.
  CHECK(std::fabs(static_cast<double>(lane0) - 100.0) < 30.0);
}

TEST_CASE("lambda must be positive for arrivals") {
  HighwayConfig hw;
  hw.arrival_rate = 0.0;
  CHECK_THROWS_AS(spawn_vehicles(hw, 100.0, 1), std::invalid_argument);
}

TEST_CASE("different lanes draw from independent substreams") {
  HighwayConfig hw;
  hw.arrival_rate = 0.2;
  hw.lanes_per_direction = 1;
  const auto arrivals = spawn_vehicles(hw, 500.0, 11);
  std::vector<SimTime> lane0, lane1;
  for (const auto& a : arrivals)
    (a.lane == 0 ? lane0 : lane1).push_back(a.time);
  REQUIRE(!lane0.empty());
  REQUIRE(!lane1.empty());
  CHECK(lane0 != lane1);
}

TEST_CASE("neighbors_within uses a closed ball and excludes self") {
  StaticMobility mob({{0, 0}, {100, 0}, {300, 0}, {0, 250}});
  SUBCASE("two nodes 100 m apart see each other at R=250") {
    auto n0 = mob.neighbors_within(0, 250.0, 0.0);
    CHECK(std::find(n0.begin(), n0.end(), 1) != n0.end());
  }
  SUBCASE("300 m apart is out of range") {
    auto n2 = mob.neighbors_within(2, 250.0, 0.0);
    CHECK(n2.size() == 1);  // only node 1 at 200 m
    CHECK(n2[0] == 1);
  }
  SUBCASE("a node exactly at distance R is included") {
    auto n0 = mob.neighbors_within(0, 250.0, 0.0);
    CHECK(std::find(n0.begin(), n0.end(), 3) != n0.end());
  }
  SUBCASE("range must be positive") {
    CHECK_THROWS_AS(mob.neighbors_within(0, 0.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("neighbor relation is symmetric and irreflexive on random layouts") {
  RandomWaypointMobility mob(20, 1000.0, 1000.0, 5.0, 0.0, 3);
  for (double t : {0.0, 50.0, 200.0}) {
    for (NodeId i = 0; i < 20; ++i) {
      const auto ni = mob.neighbors_within(i, 250.0, t);
      CHECK(std::find(ni.begin(), ni.end(), i) == ni.end());
      for (NodeId j : ni) {
        const auto nj = mob.neighbors_within(j, 250.0, t);
        CHECK(std::find(nj.begin(), nj.end(), i) != nj.end());
      }
    }
  }
}

TEST_CASE("fixed-count highway puts the requested vehicles on the road") {
  HighwayConfig hw;
  hw.speed_mps = 15.0;
  auto road = HighwayMobility::fixed_count(hw, 50, 5);
  CHECK(road.node_count() == 50);
  for (NodeId i = 0; i < 50; ++i) {
    const double x = road.x_at(i, 123.0);
    REQUIRE(x >= 0.0);
    REQUIRE(x < hw.road_length);
  }
}
