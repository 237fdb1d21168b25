#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "avoid/scenario.hpp"

namespace avoid {

struct TraceRecord {
  double t = 0.0;
  Point2 position = Point2::Zero();
  Vector2 velocity = Vector2::Zero();
  Vector2 acceleration = Vector2::Zero();
  double speed = 0.0;
  Point2 setpoint = Point2::Zero();
  std::string state;
  /// plan_adopted | map_expanded | transition | none
  std::string event = "none";
};

struct RunMetrics {
  double v_max = 0.0;
  /// Mean speed over steps spent avoiding.
  double v_avg_rrt = 0.0;
  /// Successful plans per second of planner wall time.
  double f_rrt_wall = 0.0;
  /// Successful plans per simulated second spent avoiding.
  double f_rrt_sim = 0.0;
  double d_trv = 0.0;
  bool completed = false;
  bool collided = false;
  bool failed = false;
  std::string end_reason;
  int expansions = 0;
  int plan_calls = 0;
  int plan_successes = 0;
  int transitions = 0;
  double avoiding_time = 0.0;
  double sim_time = 0.0;
  double runtime = 0.0;
  /// Smallest distance from the trajectory to ground-truth obstacles.
  double min_clearance = 0.0;
  std::uint64_t trace_checksum = 0;
};

struct RunResult {
  RunMetrics metrics;
  std::vector<TraceRecord> trace;
  std::vector<std::string> event_log;
  /// Sensed global map at the end of the run, inflated with d_safe.
  OccupancyGrid final_map{Point2::Zero(), 1.0, 1, 1};
  Polyline2 incrementals;
};

/// Sense, integrate, follow, integrate dynamics, until the mission completes,
/// fails, collides, or reaches the time cap. Deterministic for a fixed seed.
RunResult run(const Scenario& scenario, std::uint64_t seed);

std::uint64_t trace_checksum(const std::vector<TraceRecord>& trace);

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;
};

struct BatchSummary {
  std::size_t runs = 0;
  std::size_t completed = 0;
  std::size_t collided = 0;
  std::size_t failed = 0;
  MetricSummary v_max;
  MetricSummary v_avg_rrt;
  MetricSummary f_rrt_wall;
  MetricSummary f_rrt_sim;
  MetricSummary d_trv;
  double wall_seconds = 0.0;
  /// Set for a single run, where the deviation is zero by convention.
  bool single_sample = false;
  std::vector<RunMetrics> per_run;

  std::string cmpl() const;
};

/// Sample mean and standard deviation (n - 1); zero deviation for n = 1.
MetricSummary summarize(const std::vector<double>& values);

BatchSummary summarize(const std::vector<RunMetrics>& runs);

BatchSummary batch(const Scenario& scenario,
                   const std::vector<std::uint64_t>& seeds);

}  // namespace avoid
