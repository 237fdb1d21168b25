#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "avoid/vehicle.hpp"

using namespace avoid;

namespace {

// Fine-step integration of the time-optimal brake: jerk down to the peak
// deceleration, hold it, then release so acceleration and speed reach zero
// together.
double integrate_brake(double v, const DynamicsConfig& cfg, double h = 1e-6) {
  const double j = cfg.jerk;
  const double peak = std::min(cfg.a_max, std::sqrt(v * j));
  double x = 0.0;
  double a = 0.0;
  enum { Ramp, Hold, Release } phase = Ramp;
  while (v > 0.0) {
    double jerk = 0.0;
    if (phase == Ramp && a <= -peak) phase = Hold;
    if (phase != Release && v <= a * a / (2.0 * j)) phase = Release;
    if (phase == Ramp) jerk = -j;
    if (phase == Release) jerk = j;
    x += v * h + 0.5 * a * h * h;
    v += a * h;
    a = std::min(0.0, a + jerk * h);
    if (phase == Release && a == 0.0) break;
  }
  return x;
}

struct StopRun {
  double travelled = 0.0;
  double overshoot = 0.0;
};

StopRun stop_from(double speed, double dt, const DynamicsConfig& cfg) {
  VehicleState s;
  s.velocity = Vector2(speed, 0.0);
  const double bd = braking_distance(speed, cfg);
  const Point2 setpoint(bd, 0.0);
  for (int k = 0; k < static_cast<int>(20.0 / dt); ++k) {
    s = step_towards(s, setpoint, cfg, dt);
    if (s.velocity.norm() < 1e-3 && s.acceleration.norm() < 1e-2) break;
  }
  return {s.position.x(), s.position.x() - bd};
}

DynamicsConfig fast() {
  DynamicsConfig cfg;
  cfg.v_cruise = 6.0;
  return cfg;
}

}  // namespace

TEST(Braking, ClosedFormValues) {
  const DynamicsConfig cfg;
  EXPECT_EQ(braking_distance(0.0, cfg), 0.0);
  EXPECT_NEAR(braking_distance(4.0, cfg), 4.0, 1e-12);
  EXPECT_NEAR(braking_distance(6.0, cfg), 6.0 * std::sqrt(1.5), 1e-12);
  EXPECT_GE(braking_distance(6.0, cfg), 7.0);
  EXPECT_LE(braking_distance(6.0, cfg), 7.5);
  EXPECT_THROW(braking_distance(-1.0, cfg), std::invalid_argument);
}

TEST(Braking, MatchesIntegratedProfile) {
  const DynamicsConfig cfg;
  for (double v : {0.5, 2.0, 4.0, 6.0, 6.25, 7.0, 9.0}) {
    EXPECT_NEAR(braking_distance(v, cfg), integrate_brake(v, cfg), 1e-4) << v;
    EXPECT_NEAR(stopping_distance(v, 0.0, cfg), braking_distance(v, cfg), 1e-9) << v;
  }
}

TEST(Braking, MonotoneAndContinuous) {
  const DynamicsConfig cfg;
  double prev = braking_distance(0.0, cfg);
  for (double v = 0.01; v < 12.0; v += 0.01) {
    const double d = braking_distance(v, cfg);
    EXPECT_GT(d, prev);
    prev = d;
  }
  const double knee = cfg.a_max * cfg.a_max / cfg.jerk;
  EXPECT_NEAR(braking_distance(knee - 1e-9, cfg), braking_distance(knee + 1e-9, cfg), 1e-7);
}

TEST(Braking, InverseSpeed) {
  const DynamicsConfig cfg;
  for (double v : {0.3, 1.0, 4.0, 6.0, 6.25, 8.0}) {
    EXPECT_NEAR(speed_for_stopping_within(braking_distance(v, cfg), cfg), v, 1e-9);
  }
  EXPECT_EQ(speed_for_stopping_within(0.0, cfg), 0.0);
}

TEST(Braking, StoppingDistanceWithAcceleration) {
  const DynamicsConfig cfg;
  // Already braking: shorter than from rest acceleration; accelerating: longer.
  EXPECT_LT(stopping_distance(4.0, -2.0, cfg), braking_distance(4.0, cfg));
  EXPECT_GT(stopping_distance(4.0, 2.0, cfg), braking_distance(4.0, cfg));
  EXPECT_EQ(stopping_distance(0.0, 0.0, cfg), 0.0);
}

TEST(Vehicle, FixedPoint) {
  const DynamicsConfig cfg;
  VehicleState s;
  s.position = Point2(3, -2);
  s.heading = 0.7;
  VehicleState t = s;
  for (int k = 0; k < 1000; ++k) t = step_towards(t, s.position, cfg, 0.02);
  EXPECT_EQ(t.position, s.position);
  EXPECT_EQ(t.velocity, Vector2::Zero());
  EXPECT_EQ(t.heading, s.heading);
}

TEST(Vehicle, ReachesCruiseSpeed) {
  for (double vc : {4.0, 6.0}) {
    DynamicsConfig cfg;
    cfg.v_cruise = vc;
    VehicleState s;
    for (int k = 0; k < 500; ++k) s = step_towards(s, Point2(1000, 0), cfg, 0.02);
    EXPECT_NEAR(s.velocity.norm(), vc, 0.01 * vc);
    EXPECT_NEAR(s.heading, 0.0, 1e-12);
  }
}

TEST(Vehicle, BrakesWithinTwoPercent) {
  const DynamicsConfig cfg = fast();
  const StopRun r = stop_from(6.0, 0.01, cfg);
  const double bd = braking_distance(6.0, cfg);
  EXPECT_LE(std::abs(r.travelled - bd), 0.02 * bd) << r.travelled;
  EXPECT_LE(r.overshoot, 0.02 * bd);
}

TEST(Vehicle, IntegrationConverges) {
  const DynamicsConfig cfg = fast();
  const double coarse = stop_from(6.0, 0.02, cfg).travelled;
  const double fine = stop_from(6.0, 0.01, cfg).travelled;
  EXPECT_LT(std::abs(coarse - fine), 0.01 * fine);
}

TEST(Vehicle, LimitsHoldOnEveryStep) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-30, 30);
  for (double vc : {4.0, 6.0}) {
    DynamicsConfig cfg;
    cfg.v_cruise = vc;
    const double dt = 0.02;
    VehicleState s;
    Point2 setpoint(u(rng), u(rng));
    for (int k = 0; k < 20000; ++k) {
      if (k % 150 == 0) setpoint = Point2(u(rng), u(rng));
      const VehicleState n = step_towards(s, setpoint, cfg, dt);
      ASSERT_LE(n.velocity.norm(), vc + 1e-6);
      ASSERT_LE(n.acceleration.norm(), cfg.a_max + 1e-6);
      ASSERT_LE((n.acceleration - s.acceleration).norm(), cfg.jerk * dt + 1e-6);
      s = n;
    }
  }
}

TEST(Vehicle, HeadingRateLimit) {
  DynamicsConfig cfg;
  cfg.heading_rate = 1.0;
  VehicleState s;
  s.heading = 0.0;
  s.velocity = Vector2(0, 3);
  const VehicleState n = step_towards(s, Point2(0, 100), cfg, 0.02);
  EXPECT_NEAR(n.heading, 0.02, 1e-12);
  cfg.heading_rate = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Vehicle, Collision) {
  WorldModel w(Box2(Point2(-10, -10), Point2(10, 10)));
  w.add(Obstacle::rectangle(Box2(Point2(1, -1), Point2(2, 1))));
  VehicleState s;
  s.position = Point2(-5, 0);
  EXPECT_FALSE(check_collision(s, w, 0.35));
  s.position = Point2(1.5, 0);
  EXPECT_TRUE(check_collision(s, w, 0.35));
  s.position = Point2(0.5, 0);
  EXPECT_TRUE(check_collision(s, w, 0.5));
}

TEST(Vehicle, RejectsBadStep) {
  EXPECT_THROW(step_towards(VehicleState{}, Point2(1, 0), DynamicsConfig{}, 0.0),
               std::invalid_argument);
}
