#include "avoid/scenario.hpp"

#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace avoid {
namespace {

Obstacle pillar(double cx, double cy, double size = 2.0) {
  const Vector2 half = Vector2::Constant(0.5 * size);
  return Obstacle::rectangle(Box2(Point2(cx, cy) - half, Point2(cx, cy) + half));
}

Obstacle rect(double x0, double y0, double x1, double y1) {
  return Obstacle::rectangle(Box2(Point2(x0, y0), Point2(x1, y1)));
}

Scenario base(std::string name) {
  Scenario s;
  s.name = std::move(name);
  s.mission.global_waypoints = {Point2(0, 0), Point2(50, 0)};
  return s;
}

std::vector<double> numbers(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (!in.eof()) throw std::invalid_argument("malformed number list: " + text);
  return out;
}

double to_double(const std::string& v) {
  std::size_t used = 0;
  const double d = std::stod(v, &used);
  if (used != v.size()) throw std::invalid_argument("not a number: " + v);
  return d;
}

int to_int(const std::string& v) {
  std::size_t used = 0;
  const int i = std::stoi(v, &used);
  if (used != v.size()) throw std::invalid_argument("not an integer: " + v);
  return i;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("not a boolean: " + v);
}

Obstacle parse_obstacle(const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  in >> kind;
  std::string rest;
  std::getline(in, rest);
  const auto v = numbers(rest);
  if (kind == "rect") {
    if (v.size() != 4) throw std::invalid_argument("rect needs 4 numbers");
    return rect(v[0], v[1], v[2], v[3]);
  }
  if (kind == "poly") {
    if (v.size() < 6 || v.size() % 2) {
      throw std::invalid_argument("poly needs >= 3 coordinate pairs");
    }
    std::vector<Point2> pts;
    for (std::size_t k = 0; k < v.size(); k += 2) pts.emplace_back(v[k], v[k + 1]);
    return Obstacle::polygon(std::move(pts));
  }
  throw std::invalid_argument("unknown obstacle kind: " + kind);
}

void apply_tree(Scenario& s, const boost::property_tree::ptree& tree) {
  for (const auto& [section, body] : tree) {
    if (section == "scenario" || section == "obstacles") continue;
    for (const auto& [key, value] : body) {
      apply_setting(s, section, key, value.get_value<std::string>());
    }
  }
}

}  // namespace

void Scenario::validate() const {
  mission.validate();
  sensor.validate();
  dynamics.validate();
  window.validate();
  planner.validate();
  if (!(sim.dt > 0.0 && sim.time_cap > 0.0 && sim.cell_size > 0.0 &&
        sim.vehicle_radius >= 0.0)) {
    throw std::invalid_argument("invalid simulation settings");
  }
  for (const Point2& p : {mission.global_waypoints.front(), mission.global_waypoints.back()}) {
    if (!world.bounds().contains(p)) {
      throw std::invalid_argument("mission endpoint outside world bounds");
    }
    if (world.inside_obstacle(p)) {
      throw std::invalid_argument("mission endpoint inside an obstacle");
    }
  }
}

Scenario builtin_scenario(std::string_view name) {
  if (name == "empty") return base("empty");
  if (name == "world1") {
    Scenario s = base("world1");
    // Two pillars straddle the mission line, two more sit outboard. After
    // 3 m inflation only a narrow lane remains between inner and outer pairs.
    s.world.add(pillar(25.0, 4.0));
    s.world.add(pillar(25.0, -4.0));
    s.world.add(pillar(25.0, 16.0));
    s.world.add(pillar(25.0, -16.0));
    return s;
  }
  if (name == "world2") {
    Scenario s = base("world2");
    // U-shape open toward the start: back wall behind x = 30, arms at y = +-21.
    s.world.add(rect(30.0, -21.5, 31.0, 21.5));
    s.world.add(rect(12.0, 20.5, 30.0, 21.5));
    s.world.add(rect(12.0, -21.5, 30.0, -20.5));
    return s;
  }
  throw std::invalid_argument("unknown scenario: " + std::string(name));
}

void apply_setting(Scenario& s, std::string_view section, std::string_view key,
                   const std::string& value) {
  auto bad = [&] {
    return std::invalid_argument("unknown setting: " + std::string(section) +
                                 "." + std::string(key));
  };
  if (section == "dynamics") {
    if (key == "jerk") s.dynamics.jerk = to_double(value);
    else if (key == "a_max") s.dynamics.a_max = to_double(value);
    else if (key == "v_cruise") s.dynamics.v_cruise = to_double(value);
    else if (key == "heading_rate") s.dynamics.heading_rate = to_double(value);
    else throw bad();
  } else if (section == "planner") {
    if (key == "max_iterations") s.planner.max_iterations = to_int(value);
    else if (key == "path_resolution") s.planner.path_resolution = to_double(value);
    else if (key == "goal_bias") s.planner.goal_bias = to_double(value);
    else if (key == "near_radius") {
      if (value == "auto") s.planner.near_radius.reset();
      else s.planner.near_radius = to_double(value);
    } else if (key == "goal_tolerance") s.planner.goal_tolerance = to_double(value);
    else if (key == "seed") s.planner.seed = std::stoull(value);
    else throw bad();
  } else if (section == "window") {
    if (key == "d_corner") s.window.d_corner = to_double(value);
    else if (key == "d_safe") s.window.d_safe = to_double(value);
    else if (key == "rim_width") s.window.rim_width = to_double(value);
    else if (key == "expansion_step") s.window.expansion_step = to_double(value);
    else if (key == "expansion_count") s.window.expansion_count = to_int(value);
    else if (key == "max_expansions") s.window.max_expansions = to_int(value);
    else throw bad();
  } else if (section == "sensor") {
    if (key == "fov") s.sensor.fov_deg = to_double(value);
    else if (key == "range") s.sensor.range = to_double(value);
    else if (key == "ray_count") s.sensor.ray_count = to_int(value);
    else if (key == "mount_yaw") s.sensor.mount_yaw = to_double(value);
    else if (key == "noise_sigma") s.sensor.range_noise_sigma = to_double(value);
    else throw bad();
  } else if (section == "mission") {
    if (key == "spacing") s.mission.spacing = to_double(value);
    else if (key == "arrival_tolerance") s.follower.arrival_tolerance = to_double(value);
    else if (key == "lookahead_min") s.follower.lookahead_min = to_int(value);
    else if (key == "off_course_threshold") s.follower.off_course_threshold = to_double(value);
    else if (key == "rim_weight") s.follower.rim_weight = to_double(value);
    else if (key == "waypoint_reach") s.follower.waypoint_reach = to_double(value);
    else if (key == "carrot_distance") s.follower.carrot_distance = to_double(value);
    else if (key == "ceiling_retries") s.follower.ceiling_retries = to_int(value);
    else if (key == "unknown_is_free") s.follower.unknown_is_free = to_bool(value);
    else throw bad();
  } else if (section == "simulation") {
    if (key == "dt") s.sim.dt = to_double(value);
    else if (key == "time_cap") s.sim.time_cap = to_double(value);
    else if (key == "vehicle_radius") s.sim.vehicle_radius = to_double(value);
    else if (key == "cell_size") s.sim.cell_size = to_double(value);
    else throw bad();
  } else {
    throw bad();
  }
}

void apply_config_file(Scenario& s, const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  boost::property_tree::ini_parser::read_ini(path.string(), tree);
  apply_tree(s, tree);
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  boost::property_tree::ini_parser::read_ini(path.string(), tree);
  Scenario s;
  s.name = tree.get<std::string>("scenario.name", path.stem().string());
  if (const auto bounds = tree.get_optional<std::string>("scenario.bounds")) {
    const auto v = numbers(*bounds);
    if (v.size() != 4) throw std::invalid_argument("bounds needs 4 numbers");
    s.world = WorldModel(Box2(Point2(v[0], v[1]), Point2(v[2], v[3])));
  }
  const auto wps = numbers(tree.get<std::string>("scenario.waypoints"));
  if (wps.size() < 4 || wps.size() % 2) {
    throw std::invalid_argument("waypoints needs >= 2 coordinate pairs");
  }
  for (std::size_t k = 0; k < wps.size(); k += 2) {
    s.mission.global_waypoints.emplace_back(wps[k], wps[k + 1]);
  }
  if (const auto obstacles = tree.get_child_optional("obstacles")) {
    for (const auto& [key, value] : *obstacles) {
      s.world.add(parse_obstacle(value.get_value<std::string>()));
    }
  }
  apply_tree(s, tree);
  s.validate();
  return s;
}

}  // namespace avoid
