#include "avoid/sensor.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace avoid {

void SensorConfig::validate() const {
  if (!(fov_deg > 0.0 && fov_deg <= 180.0)) {
    throw std::invalid_argument("sensor fov must lie in (0, 180] degrees");
  }
  if (!(range > 0.0)) throw std::invalid_argument("sensor range must be > 0");
  if (ray_count < 2) throw std::invalid_argument("sensor needs >= 2 rays");
  if (range_noise_sigma < 0.0) {
    throw std::invalid_argument("noise sigma must be >= 0");
  }
}

std::vector<double> ray_angles(double heading, const SensorConfig& cfg) {
  const double fov = cfg.fov_deg * std::numbers::pi / 180.0;
  const double first = heading + cfg.mount_yaw - 0.5 * fov;
  const double spacing = fov / (cfg.ray_count - 1);
  std::vector<double> angles(cfg.ray_count);
  for (int k = 0; k < cfg.ray_count; ++k) angles[k] = first + k * spacing;
  return angles;
}

namespace {

Scan cast(const WorldModel& world, const Point2& position, double heading,
          const SensorConfig& cfg, double timestamp, std::mt19937_64* rng) {
  cfg.validate();
  Scan out;
  out.origin = position;
  out.timestamp = timestamp;
  std::normal_distribution<double> noise(0.0, cfg.range_noise_sigma);
  for (double angle : ray_angles(heading, cfg)) {
    const Vector2 dir(std::cos(angle), std::sin(angle));
    auto t = world.ray_cast(position, dir, cfg.range);
    if (!t) continue;
    double range = *t;
    if (rng && cfg.range_noise_sigma > 0.0) {
      range = std::clamp(range + noise(*rng), 0.0, cfg.range);
    }
    out.hits.push_back(position + range * dir);
  }
  return out;
}

}  // namespace

Scan scan(const WorldModel& world, const Point2& position, double heading,
          const SensorConfig& cfg, double timestamp) {
  return cast(world, position, heading, cfg, timestamp, nullptr);
}

Scan scan(const WorldModel& world, const Point2& position, double heading,
          const SensorConfig& cfg, double timestamp, std::mt19937_64& rng) {
  return cast(world, position, heading, cfg, timestamp, &rng);
}

std::size_t integrate_scan(OccupancyGrid& grid, const Scan& s) {
  std::size_t skipped = 0;
  for (const Point2& hit : s.hits) {
    if (!mark_occupied(grid, hit)) ++skipped;
  }
  return skipped;
}

}  // namespace avoid
