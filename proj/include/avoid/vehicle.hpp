#pragma once

#include <limits>

#include "avoid/types.hpp"
#include "avoid/world.hpp"

namespace avoid {

/// Jerk/acceleration/velocity limits of the horizontal position controller.
struct DynamicsConfig {
  double jerk = 4.0;
  double a_max = 5.0;
  double v_cruise = 4.0;
  /// Heading slew limit in rad/s; infinity tracks velocity instantly.
  double heading_rate = std::numeric_limits<double>::infinity();

  void validate() const;
};

struct VehicleState {
  Point2 position = Point2::Zero();
  Vector2 velocity = Vector2::Zero();
  Vector2 acceleration = Vector2::Zero();
  double heading = 0.0;
};

/// Closed-form jerk-limited stopping distance from speed v at zero
/// acceleration: triangular deceleration for v <= a_max^2 / jerk,
/// trapezoidal above.
double braking_distance(double v, const DynamicsConfig& cfg);

/// Stopping distance from speed v >= 0 with current acceleration a along the
/// direction of travel, obtained by integrating the optimal braking phases.
double stopping_distance(double v, double a, const DynamicsConfig& cfg);

/// Speed that brakes to rest in exactly d metres (inverse of
/// braking_distance).
double speed_for_stopping_within(double d, const DynamicsConfig& cfg);

/// One control + integration step toward a position setpoint. The
/// along-track channel picks the largest acceleration that still allows a
/// jerk-limited stop at the setpoint; the cross-track channel damps lateral
/// velocity. Velocity is updated before position.
VehicleState step_towards(const VehicleState& state, const Point2& setpoint,
                          const DynamicsConfig& cfg, double dt);

inline bool check_collision(const VehicleState& state, const WorldModel& world,
                            double radius) {
  return disc_intersects(world, state.position, radius);
}

}  // namespace avoid
