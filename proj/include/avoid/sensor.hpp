#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "avoid/grid_map.hpp"
#include "avoid/world.hpp"

namespace avoid {

/// Forward-facing depth sensor reduced to a planar ray fan.
struct SensorConfig {
  double fov_deg = 87.0;
  double range = 10.0;
  int ray_count = 128;
  double mount_yaw = 0.0;
  /// Standard deviation of additive range noise; zero disables noise.
  double range_noise_sigma = 0.0;

  void validate() const;
};

struct Scan {
  Point2 origin = Point2::Zero();
  std::vector<Point2> hits;
  double timestamp = 0.0;
};

/// Ray angles in radians, evenly spanning heading + mount_yaw +- fov/2.
std::vector<double> ray_angles(double heading, const SensorConfig& cfg);

Scan scan(const WorldModel& world, const Point2& position, double heading,
          const SensorConfig& cfg, double timestamp = 0.0);

/// Noisy variant; the generator is only advanced when noise is enabled.
Scan scan(const WorldModel& world, const Point2& position, double heading,
          const SensorConfig& cfg, double timestamp, std::mt19937_64& rng);

/// Marks every hit Occupied. Returns the number of hits outside the grid.
std::size_t integrate_scan(OccupancyGrid& grid, const Scan& s);

}  // namespace avoid
