#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "avoid/local_window.hpp"
#include "avoid/rrt_star.hpp"
#include "avoid/vehicle.hpp"

namespace avoid {

/// Predefined survey route.
struct MissionPlan {
  Polyline2 global_waypoints;
  double spacing = 2.0;

  void validate() const;
};

struct MissionConfig {
  double arrival_tolerance = 0.75;
  int lookahead_min = 1;
  double off_course_threshold = 1.5;
  double rim_weight = 0.8;
  /// Radius at which an intermediate waypoint of the active avoidance path
  /// counts as passed.
  double waypoint_reach = 0.5;
  /// Arc length along the active avoidance path at which the setpoint is
  /// placed, shortened where the chord would cut blocked space. 0 steers at
  /// the next waypoint.
  double carrot_distance = 0.0;
  /// Failed plan calls tolerated at the expansion ceiling before giving up.
  int ceiling_retries = 50;
  bool unknown_is_free = true;
};

/// Incremental waypoints at <= spacing intervals, keeping every original
/// vertex exactly once.
Polyline2 subdivide(const MissionPlan& plan);

/// Indices of the original vertices inside subdivide(plan).
std::vector<std::size_t> vertex_indices(const MissionPlan& plan);

/// Direct mission segment test: the outer rim blocks.
bool check_direct(const LocalMap& map, const Point2& pos, const Point2& wp,
                  bool unknown_is_free = true);

struct AvoidanceTarget {
  Point2 point;
  std::size_t index;
};

/// First incremental waypoint at or after the obstruction that starts at
/// obstruction_index, lying in a Free cell and at least lookahead_min steps
/// past the run of blocked waypoints. nullopt when the scan leaves the window
/// before finding one.
std::optional<AvoidanceTarget> select_avoidance_target(
    const LocalMap& map, const Polyline2& incrementals,
    std::size_t obstruction_index, int lookahead_min = 1,
    bool unknown_is_free = true);

struct PathCost {
  double c_length = 0.0;
  std::size_t n_or = 0;
  double cell_size = 0.0;
  double rim_weight = 0.8;

  /// Length plus the outer-rim penalty.
  double c_new() const {
    return c_length + static_cast<double>(n_or) * cell_size * rim_weight;
  }
};

PathCost path_cost_current(const Polyline2& remaining, const LocalMap& map,
                           double rim_weight);

enum class Decision { Adopt, Keep };

/// Strictly shorter incoming paths replace the current one.
Decision accept_or_keep(const PathCost& current, const PlannedPath& incoming);
Decision accept_or_keep(double current_cost, const PlannedPath& incoming);

/// Skip-node smoothing anchored at path[0]: while path[2] is reachable
/// directly from path[0] (outer rim allowed), path[1] is dropped.
PlannedPath smooth(const PlannedPath& path, const LocalMap& map,
                   bool unknown_is_free = true);

// Follower state machine ----------------------------------------------------

struct OnPath {
  std::size_t next_index = 0;
};

struct Avoiding {
  /// Remaining waypoints of the adopted path, excluding the vehicle position.
  std::optional<Polyline2> path;
  Point2 target;
  std::size_t target_index;
};

struct Completed {};

struct Failed {
  std::string reason;
};

using FollowerState = std::variant<OnPath, Avoiding, Completed, Failed>;

std::string state_tag(const FollowerState& s);

enum class EventKind {
  Transition,
  PlanFailed,
  PlanAdopted,
  PlanKept,
  MapExpanded,
  TargetSelected,
};

std::string_view to_string(EventKind k);

struct MissionEvent {
  EventKind kind;
  std::string detail;
};

struct FollowerStats {
  int plan_calls = 0;
  int plan_successes = 0;
  int adoptions = 0;
  int expansions = 0;
  int transitions = 0;
  double plan_wall_seconds = 0.0;
};

struct StepOutput {
  Point2 setpoint;
  std::vector<MissionEvent> events;
};

/// Master node: follows the subdivided mission, hands obstructed stretches to
/// the planner, and returns to the mission path afterwards.
class Follower {
 public:
  Follower(MissionPlan plan, MissionConfig config, WindowSpec window,
           PlannerConfig planner, std::uint64_t seed);

  StepOutput step(const OccupancyGrid& global, const VehicleState& vehicle);

  const FollowerState& state() const { return state_; }
  const Polyline2& incrementals() const { return incrementals_; }
  const WindowSpec& window() const { return window_; }
  const FollowerStats& stats() const { return stats_; }
  const std::optional<LocalMap>& last_local_map() const { return local_map_; }
  bool finished() const {
    return std::holds_alternative<Completed>(state_) ||
           std::holds_alternative<Failed>(state_);
  }

 private:
  Point2 step_on_path(const OccupancyGrid& global, const Point2& pos,
                      StepOutput& out);
  Point2 step_avoiding(const OccupancyGrid& global, const Point2& pos,
                       StepOutput& out);
  void enter_avoiding(const OccupancyGrid& global, const Point2& pos,
                      std::size_t obstruction_index, StepOutput& out);
  const LocalMap& build_map(const OccupancyGrid& global, const Point2& pos,
                            const Point2& target);
  bool expand(StepOutput& out);
  void fail(const std::string& reason, StepOutput& out);
  void transition(FollowerState next, StepOutput& out);
  std::size_t leg_end(std::size_t index) const;
  bool remaining_clear(const Point2& pos, const Polyline2& remaining) const;
  Point2 path_carrot(const Point2& pos, const Polyline2& remaining) const;

  MissionPlan plan_;
  MissionConfig config_;
  WindowSpec base_window_;
  WindowSpec window_;
  PlannerConfig planner_;
  std::mt19937_64 rng_;
  Polyline2 incrementals_;
  std::vector<std::size_t> vertices_;
  FollowerState state_ = OnPath{0};
  std::optional<LocalMap> local_map_;
  FollowerStats stats_;
  int ceiling_failures_ = 0;
};

}  // namespace avoid
