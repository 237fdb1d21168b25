#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "avoid/geometry.hpp"
#include "avoid/sensor.hpp"
#include "oracles.hpp"

using namespace avoid;

namespace {

Obstacle rect(double x0, double y0, double x1, double y1) {
  return Obstacle::rectangle(Box2(Point2(x0, y0), Point2(x1, y1)));
}

WorldModel open_world() { return WorldModel(Box2(Point2(-30, -30), Point2(30, 30))); }

}  // namespace

TEST(Geometry, PathLength) {
  EXPECT_EQ(path_length(Polyline2{}), 0.0);
  EXPECT_EQ(path_length(Polyline2{{1, 1}}), 0.0);
  EXPECT_DOUBLE_EQ(path_length(Polyline2{{0, 0}, {3, 4}, {3, 0}}), 9.0);
}

TEST(Geometry, Steer) {
  const Point2 a(1, 1);
  const Point2 far = steer(a, Point2(11, 1), 2.0);
  EXPECT_NEAR((far - Point2(3, 1)).norm(), 0.0, 1e-12);
  const Point2 near = steer(a, Point2(2, 1), 2.0);
  EXPECT_EQ(near, Point2(2, 1));
  EXPECT_THROW(steer(a, a, 1.0), std::invalid_argument);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int k = 0; k < 1000; ++k) {
    const Point2 from(u(rng), u(rng));
    const Point2 to(u(rng), u(rng));
    const Point2 s = steer(from, to, 1.0);
    EXPECT_LT(point_segment_distance(s, from, to), 1e-12);
    EXPECT_NEAR((s - from).norm(), std::min(1.0, (to - from).norm()), 1e-12);
  }
}

TEST(World, ObstacleValidation) {
  EXPECT_THROW(Obstacle::polygon({{0, 0}, {1, 0}}), std::invalid_argument);
  const Obstacle tri = Obstacle::polygon({{0, 0}, {2, 0}, {0, 2}});
  EXPECT_TRUE(tri.contains({0.5, 0.5}));
  EXPECT_FALSE(tri.contains({1.5, 1.5}));
  EXPECT_NEAR(tri.distance({-1, 0.5}), 1.0, 1e-12);
}

TEST(World, DiscIntersection) {
  WorldModel w = open_world();
  w.add(rect(2, -1, 3, 1));
  EXPECT_TRUE(disc_intersects(w, {1.7, 0}, 0.35));
  EXPECT_FALSE(disc_intersects(w, {1.6, 0}, 0.35));
  EXPECT_NEAR(w.clearance({0, 0}), 2.0, 1e-12);
}

TEST(Sensor, WallAtFiveMetres) {
  WorldModel w = open_world();
  w.add(rect(5, -10, 6, 10));
  SensorConfig cfg;
  cfg.ray_count = 129;  // odd count puts a ray on the heading
  const Scan s = scan(w, Point2::Zero(), 0.0, cfg);
  ASSERT_EQ(s.hits.size(), 129u);
  const Point2& center = s.hits[64];
  EXPECT_NEAR(center.norm(), 5.0, 1e-9);
}

TEST(Sensor, WallBeyondRange) {
  WorldModel w = open_world();
  w.add(rect(12, -10, 13, 10));
  EXPECT_TRUE(scan(w, Point2::Zero(), 0.0, SensorConfig{}).hits.empty());
}

TEST(Sensor, ObstacleBehind) {
  WorldModel w = open_world();
  w.add(rect(-4, -1, -3, 1));
  EXPECT_TRUE(scan(w, Point2::Zero(), 0.0, SensorConfig{}).hits.empty());
  EXPECT_FALSE(scan(w, Point2::Zero(), std::numbers::pi, SensorConfig{}).hits.empty());
}

TEST(Sensor, RayFan) {
  SensorConfig cfg;
  const auto a = ray_angles(0.3, cfg);
  ASSERT_EQ(a.size(), 128u);
  const double half = 0.5 * 87.0 * std::numbers::pi / 180.0;
  EXPECT_NEAR(a.front(), 0.3 - half, 1e-12);
  EXPECT_NEAR(a.back(), 0.3 + half, 1e-12);
  cfg.ray_count = 1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Sensor, NearestHitAgainstMarchOracle) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> pos(-8, 8);
  std::uniform_real_distribution<double> size(0.5, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    WorldModel w = open_world();
    for (int k = 0; k < 6; ++k) {
      const double x = pos(rng) + 10.0;
      const double y = pos(rng);
      w.add(rect(x, y, x + size(rng), y + size(rng)));
    }
    SensorConfig cfg;
    cfg.ray_count = 32;
    const Scan s = scan(w, Point2::Zero(), 0.0, cfg);
    const auto angles = ray_angles(0.0, cfg);
    std::size_t hit = 0;
    for (double angle : angles) {
      const Vector2 dir(std::cos(angle), std::sin(angle));
      const auto t = oracle::march(w, Point2::Zero(), dir, cfg.range);
      if (!t) continue;
      ASSERT_LT(hit, s.hits.size());
      EXPECT_NEAR(s.hits[hit].norm(), *t, 2e-3);
      ++hit;
    }
    EXPECT_EQ(hit, s.hits.size());
  }
}

TEST(Sensor, Deterministic) {
  WorldModel w = open_world();
  w.add(rect(4, -2, 5, 3));
  const Scan a = scan(w, {0.1, 0.2}, 0.05, SensorConfig{});
  const Scan b = scan(w, {0.1, 0.2}, 0.05, SensorConfig{});
  EXPECT_EQ(a.hits, b.hits);
}

TEST(Sensor, NoiseUsesGenerator) {
  WorldModel w = open_world();
  w.add(rect(4, -2, 5, 3));
  SensorConfig cfg;
  cfg.range_noise_sigma = 0.05;
  std::mt19937_64 r1(4), r2(4);
  const Scan a = scan(w, Point2::Zero(), 0.0, cfg, 0.0, r1);
  const Scan b = scan(w, Point2::Zero(), 0.0, cfg, 0.0, r2);
  EXPECT_EQ(a.hits, b.hits);
  EXPECT_NE(a.hits, scan(w, Point2::Zero(), 0.0, cfg).hits);
}

TEST(Sensor, Integrate) {
  OccupancyGrid g(Point2::Zero(), 0.5, 10, 10, CellState::Free);
  Scan empty;
  const OccupancyGrid before = g;
  EXPECT_EQ(integrate_scan(g, empty), 0u);
  EXPECT_TRUE(g == before);

  Scan s;
  s.hits = {{0.1, 0.1}, {1.1, 0.1}, {2.1, 0.1}};
  EXPECT_EQ(integrate_scan(g, s), 0u);
  EXPECT_EQ(g.count(CellState::Occupied), 3u);

  Scan out;
  out.hits = {{20.0, 0.1}};
  EXPECT_EQ(integrate_scan(g, out), 1u);
  EXPECT_EQ(g.count(CellState::Occupied), 3u);
  EXPECT_EQ(g.out_of_bounds_marks(), 1u);
}
