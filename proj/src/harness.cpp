#include "avoid/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace avoid {
namespace {

std::string event_tag(const std::vector<MissionEvent>& events) {
  bool adopted = false;
  bool expanded = false;
  for (const MissionEvent& e : events) {
    if (e.kind == EventKind::Transition) return "transition";
    expanded = expanded || e.kind == EventKind::MapExpanded;
    adopted = adopted || e.kind == EventKind::PlanAdopted;
  }
  if (expanded) return "map_expanded";
  if (adopted) return "plan_adopted";
  return "none";
}

class Fnv1a {
 public:
  void add(const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < n; ++k) {
      hash_ ^= bytes[k];
      hash_ *= 1099511628211ull;
    }
  }
  void add(double v) { add(&v, sizeof v); }
  void add(const std::string& s) { add(s.data(), s.size()); }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 14695981039346656037ull;
};

}  // namespace

std::uint64_t trace_checksum(const std::vector<TraceRecord>& trace) {
  Fnv1a h;
  for (const TraceRecord& r : trace) {
    h.add(r.t);
    h.add(r.position.x());
    h.add(r.position.y());
    h.add(r.velocity.x());
    h.add(r.velocity.y());
    h.add(r.state);
    h.add(r.event);
  }
  return h.value();
}

RunResult run(const Scenario& scenario, std::uint64_t seed) {
  scenario.validate();
  const auto wall_start = std::chrono::steady_clock::now();
  const SimulationConfig& sim = scenario.sim;

  OccupancyGrid global = OccupancyGrid::covering(scenario.world.bounds(), sim.cell_size);
  MissionConfig follower_config = scenario.follower;
  if (follower_config.carrot_distance <= 0.0) {
    follower_config.carrot_distance =
        braking_distance(scenario.dynamics.v_cruise, scenario.dynamics) + 1.0;
  }
  Follower follower(scenario.mission, follower_config, scenario.window,
                    scenario.planner, seed);
  std::mt19937_64 sensor_rng(seed ^ 0x9e3779b97f4a7c15ull);

  VehicleState vehicle;
  const auto& wps = scenario.mission.global_waypoints;
  vehicle.position = wps.front();
  const Vector2 first_leg = wps[1] - wps[0];
  vehicle.heading = std::atan2(first_leg.y(), first_leg.x());

  RunResult result;
  result.incrementals = follower.incrementals();
  RunMetrics& m = result.metrics;

  auto record = [&](double t, const Point2& setpoint, const std::string& event) {
    TraceRecord r;
    r.t = t;
    r.position = vehicle.position;
    r.velocity = vehicle.velocity;
    r.acceleration = vehicle.acceleration;
    r.speed = vehicle.velocity.norm();
    r.setpoint = setpoint;
    r.state = state_tag(follower.state());
    r.event = event;
    result.trace.push_back(std::move(r));
  };

  record(0.0, vehicle.position, "none");
  if (check_collision(vehicle, scenario.world, sim.vehicle_radius)) m.collided = true;

  const auto steps = static_cast<long>(std::ceil(sim.time_cap / sim.dt - 1e-9));
  bool disturbed = false;
  for (long k = 0; k < steps && !m.collided; ++k) {
    const double t = k * sim.dt;
    const Scan s = scan(scenario.world, vehicle.position, vehicle.heading,
                        scenario.sensor, t, sensor_rng);
    integrate_scan(global, s);

    const StepOutput out = follower.step(global, vehicle);
    for (const MissionEvent& e : out.events) {
      result.event_log.push_back(std::to_string(t) + " " +
                                 std::string(to_string(e.kind)) + " " + e.detail);
    }
    if (follower.finished()) {
      result.trace.back().state = state_tag(follower.state());
      result.trace.back().event = event_tag(out.events);
      break;
    }

    vehicle = step_towards(vehicle, out.setpoint, scenario.dynamics, sim.dt);
    if (sim.disturbance && !disturbed && t + sim.dt >= sim.disturbance->time) {
      vehicle.velocity += sim.disturbance->impulse;
      disturbed = true;
    }
    record((k + 1) * sim.dt, out.setpoint, event_tag(out.events));
    if (check_collision(vehicle, scenario.world, sim.vehicle_radius)) m.collided = true;
  }

  const FollowerState& final_state = follower.state();
  m.completed = std::holds_alternative<Completed>(final_state) && !m.collided;
  m.failed = std::holds_alternative<Failed>(final_state);
  if (m.collided) {
    m.end_reason = "collision";
  } else if (m.completed) {
    m.end_reason = "completed";
  } else if (m.failed) {
    m.end_reason = "failed:" + std::get<Failed>(final_state).reason;
  } else {
    m.end_reason = "time_cap";
  }

  m.min_clearance = std::numeric_limits<double>::infinity();
  double avoid_speed = 0.0;
  std::size_t avoid_steps = 0;
  for (std::size_t k = 0; k < result.trace.size(); ++k) {
    const TraceRecord& r = result.trace[k];
    m.v_max = std::max(m.v_max, r.speed);
    if (k > 0) m.d_trv += (r.position - result.trace[k - 1].position).norm();
    if (k > 0 && r.state == "avoiding") {
      avoid_speed += r.speed;
      ++avoid_steps;
    }
    m.min_clearance = std::min(m.min_clearance, scenario.world.clearance(r.position));
  }
  m.avoiding_time = avoid_steps * sim.dt;
  m.v_avg_rrt = avoid_steps ? avoid_speed / avoid_steps : 0.0;

  const FollowerStats& stats = follower.stats();
  m.expansions = stats.expansions;
  m.plan_calls = stats.plan_calls;
  m.plan_successes = stats.plan_successes;
  m.transitions = stats.transitions;
  m.f_rrt_wall = stats.plan_wall_seconds > 0.0
                     ? stats.plan_successes / stats.plan_wall_seconds
                     : 0.0;
  m.f_rrt_sim = m.avoiding_time > 0.0 ? stats.plan_successes / m.avoiding_time : 0.0;
  m.sim_time = result.trace.back().t;
  m.trace_checksum = trace_checksum(result.trace);
  result.final_map = inflate(global, scenario.window.d_safe, scenario.window.rim_width);
  m.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
                  .count();
  return result;
}

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  if (values.size() < 2) return s;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / (values.size() - 1));
  return s;
}

BatchSummary summarize(const std::vector<RunMetrics>& runs) {
  BatchSummary b;
  b.runs = runs.size();
  b.single_sample = runs.size() == 1;
  b.per_run = runs;
  auto column = [&](auto field) {
    std::vector<double> v;
    for (const RunMetrics& m : runs) v.push_back(field(m));
    return summarize(v);
  };
  b.v_max = column([](const RunMetrics& m) { return m.v_max; });
  b.v_avg_rrt = column([](const RunMetrics& m) { return m.v_avg_rrt; });
  b.f_rrt_wall = column([](const RunMetrics& m) { return m.f_rrt_wall; });
  b.f_rrt_sim = column([](const RunMetrics& m) { return m.f_rrt_sim; });
  b.d_trv = column([](const RunMetrics& m) { return m.d_trv; });
  for (const RunMetrics& m : runs) {
    b.completed += m.completed;
    b.collided += m.collided;
    b.failed += m.failed;
    b.wall_seconds += m.runtime;
  }
  return b;
}

std::string BatchSummary::cmpl() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02zu|%02zu", completed, runs);
  return buf;
}

BatchSummary batch(const Scenario& scenario,
                   const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("batch needs at least one seed");
  std::vector<RunMetrics> runs;
  runs.reserve(seeds.size());
  for (std::uint64_t seed : seeds) runs.push_back(run(scenario, seed).metrics);
  return summarize(runs);
}

}  // namespace avoid
