#include "avoid/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace avoid {

void DynamicsConfig::validate() const {
  if (!(jerk > 0.0 && a_max > 0.0 && v_cruise > 0.0)) {
    throw std::invalid_argument("dynamics limits must be > 0");
  }
  if (!(heading_rate > 0.0)) {
    throw std::invalid_argument("heading rate must be > 0");
  }
}

double braking_distance(double v, const DynamicsConfig& cfg) {
  if (v < 0.0) throw std::invalid_argument("braking_distance: v < 0");
  const double j = cfg.jerk;
  const double a = cfg.a_max;
  if (v <= a * a / j) return v * std::sqrt(v / j);
  return 0.5 * v * (v / a + a / j);
}

double speed_for_stopping_within(double d, const DynamicsConfig& cfg) {
  if (d <= 0.0) return 0.0;
  const double j = cfg.jerk;
  const double a = cfg.a_max;
  if (d <= a * a * a / (j * j)) return std::cbrt(d * d * j);
  const double h = a / (2.0 * j);
  return a * (-h + std::sqrt(h * h + 2.0 * d / a));
}

namespace {

struct Kinematics {
  double x = 0.0;
  double v = 0.0;
  double a = 0.0;

  void advance(double jerk, double t) {
    x += v * t + 0.5 * a * t * t + jerk * t * t * t / 6.0;
    v += a * t + 0.5 * jerk * t * t;
    a += jerk * t;
  }
};

}  // namespace

double stopping_distance(double v, double a, const DynamicsConfig& cfg) {
  const double j = cfg.jerk;
  const double a_max = cfg.a_max;
  if (v <= 0.0) return 0.0;
  Kinematics k{0.0, v, a};
  if (a < 0.0 && a * a >= 2.0 * j * v) {
    // Releasing the brake at full jerk still stops before a returns to 0.
    const double t = (-a - std::sqrt(a * a - 2.0 * j * v)) / j;
    k.advance(j, t);
    return k.x;
  }
  double peak = std::sqrt(0.5 * (a * a + 2.0 * j * v));
  if (peak <= a_max) {
    k.advance(-j, (a + peak) / j);
    k.advance(j, peak / j);
    return k.x;
  }
  peak = a_max;
  k.advance(-j, (a + peak) / j);
  const double hold = (k.v - peak * peak / (2.0 * j)) / peak;
  k.advance(0.0, std::max(hold, 0.0));
  k.advance(j, peak / j);
  return k.x;
}

namespace {

constexpr double kHeadingSpeed = 0.2;

double wrap_angle(double a) {
  return std::remainder(a, 2.0 * std::numbers::pi);
}

// Acceleration that drives a velocity error to zero without overshoot under
// the jerk limit.
double settle_accel(double error, const DynamicsConfig& cfg) {
  const double mag = std::min(cfg.a_max, std::sqrt(2.0 * cfg.jerk * std::abs(error)));
  return std::copysign(mag, error);
}

}  // namespace

VehicleState step_towards(const VehicleState& state, const Point2& setpoint,
                          const DynamicsConfig& cfg, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  const double dj = cfg.jerk * dt;
  const Vector2 offset = setpoint - state.position;
  const double dist = offset.norm();

  // Inside the braking zone the desired velocity drops to zero so the
  // jerk-limited brake runs its full profile and stops on the setpoint.
  Vector2 v_des = Vector2::Zero();
  if (dist >= 1e-9) {
    const Vector2 u = offset / dist;
    const double v_stop = speed_for_stopping_within(dist, cfg);
    if (state.velocity.dot(u) < v_stop) {
      // Slow down for sharp turns so momentum does not carry the vehicle
      // wide of the segment: a right-angle turn starts with a full stop.
      const double speed = state.velocity.norm();
      const double turn = speed > kHeadingSpeed
                              ? std::max(0.0, state.velocity.dot(u) / speed)
                              : 1.0;
      v_des = turn * std::min(cfg.v_cruise, v_stop) * u;
    }
  }
  const Vector2 error = v_des - state.velocity;
  const double e = error.norm();
  Vector2 target = Vector2::Zero();
  if (e > 0.0) target = error / e * std::abs(settle_accel(e, cfg));
  if (target.norm() > cfg.a_max) target *= cfg.a_max / target.norm();
  Vector2 delta = target - state.acceleration;
  if (delta.norm() > dj) delta *= dj / delta.norm();
  const Vector2 accel = state.acceleration + delta;

  VehicleState next = state;
  next.acceleration = accel;
  next.velocity = state.velocity + accel * dt;
  const double speed = next.velocity.norm();
  if (speed > cfg.v_cruise) next.velocity *= cfg.v_cruise / speed;
  next.position = state.position + next.velocity * dt;

  if (next.velocity.norm() > kHeadingSpeed) {
    const double desired = std::atan2(next.velocity.y(), next.velocity.x());
    const double turn = wrap_angle(desired - state.heading);
    const double max_turn = cfg.heading_rate * dt;
    next.heading = wrap_angle(state.heading + std::clamp(turn, -max_turn, max_turn));
  }
  return next;
}

}  // namespace avoid
