#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "avoid/mission.hpp"
#include "avoid/sensor.hpp"
#include "avoid/vehicle.hpp"
#include "avoid/world.hpp"

namespace avoid {

/// One-shot velocity kick applied to the vehicle (wind gust).
struct Disturbance {
  double time = 0.0;
  Vector2 impulse = Vector2::Zero();
};

struct SimulationConfig {
  double dt = 0.02;
  double time_cap = 300.0;
  double vehicle_radius = 0.35;
  double cell_size = 0.5;
  std::optional<Disturbance> disturbance;
};

struct Scenario {
  std::string name;
  WorldModel world{Box2(Point2(-20, -45), Point2(80, 45))};
  MissionPlan mission;
  SensorConfig sensor;
  DynamicsConfig dynamics;
  WindowSpec window;
  PlannerConfig planner;
  MissionConfig follower;
  SimulationConfig sim;

  /// Throws std::invalid_argument when a component is inconsistent.
  void validate() const;
};

/// world1 (four pillars), world2 (U-shape open toward -x) or empty.
Scenario builtin_scenario(std::string_view name);

/// Parses a scenario description: an INI-style file with a [scenario]
/// section (name, bounds, waypoints), an [obstacles] section whose values
/// are "rect x0 y0 x1 y1" or "poly x0 y0 x1 y1 ...", and optional parameter
/// sections as accepted by apply_config_file.
Scenario load_scenario_file(const std::filesystem::path& path);

/// Overrides parameters from "key = value" lines grouped in [dynamics],
/// [planner], [window], [sensor], [mission] and [simulation] sections.
void apply_config_file(Scenario& scenario, const std::filesystem::path& path);

/// Applies one setting; throws std::invalid_argument for unknown keys.
void apply_setting(Scenario& scenario, std::string_view section,
                   std::string_view key, const std::string& value);

}  // namespace avoid
