#include "avoid/mission.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "avoid/geometry.hpp"

namespace avoid {

void MissionPlan::validate() const {
  if (global_waypoints.size() < 2) {
    throw std::invalid_argument("mission needs at least two waypoints");
  }
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be > 0");
}

Polyline2 subdivide(const MissionPlan& plan) {
  plan.validate();
  Polyline2 out{plan.global_waypoints.front()};
  for (std::size_t s = 1; s < plan.global_waypoints.size(); ++s) {
    const Point2& a = plan.global_waypoints[s - 1];
    const Point2& b = plan.global_waypoints[s];
    const double len = (b - a).norm();
    if (len == 0.0) continue;
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / plan.spacing - 1e-9)));
    for (int k = 1; k < pieces; ++k) {
      out.push_back(a + (b - a) * (static_cast<double>(k) / pieces));
    }
    out.push_back(b);
  }
  return out;
}

std::vector<std::size_t> vertex_indices(const MissionPlan& plan) {
  plan.validate();
  std::vector<std::size_t> out{0};
  std::size_t index = 0;
  for (std::size_t s = 1; s < plan.global_waypoints.size(); ++s) {
    const double len = (plan.global_waypoints[s] - plan.global_waypoints[s - 1]).norm();
    if (len == 0.0) continue;
    index += std::max(1, static_cast<int>(std::ceil(len / plan.spacing - 1e-9)));
    out.push_back(index);
  }
  return out;
}

bool check_direct(const LocalMap& map, const Point2& pos, const Point2& wp,
                  bool unknown_is_free) {
  return is_segment_free(map.grid, pos, wp, /*rim_blocks=*/true, unknown_is_free);
}

std::optional<AvoidanceTarget> select_avoidance_target(
    const LocalMap& map, const Polyline2& incrementals,
    std::size_t obstruction_index, int lookahead_min, bool unknown_is_free) {
  const TraversalRules rules{true, unknown_is_free};
  const std::size_t n = incrementals.size();
  // 1 vacant, 0 blocked, -1 outside the window
  auto vacancy = [&](std::size_t k) {
    const auto cell = map.grid.world_to_cell(incrementals[k]);
    if (!cell) return -1;
    return is_passable(map.grid.at(*cell), rules) ? 1 : 0;
  };
  std::size_t k = obstruction_index;
  for (; k < n; ++k) {
    const int v = vacancy(k);
    if (v < 0) return std::nullopt;
    if (v == 1) break;
  }
  if (lookahead_min > 1) k += static_cast<std::size_t>(lookahead_min - 1);
  for (; k < n; ++k) {
    const int v = vacancy(k);
    if (v < 0) return std::nullopt;
    if (v == 1) return AvoidanceTarget{incrementals[k], k};
  }
  return std::nullopt;
}

PathCost path_cost_current(const Polyline2& remaining, const LocalMap& map,
                           double rim_weight) {
  PathCost cost;
  cost.c_length = path_length(remaining);
  cost.n_or = count_rim_cells(map.grid, remaining);
  cost.cell_size = map.grid.cell_size();
  cost.rim_weight = rim_weight;
  return cost;
}

Decision accept_or_keep(double current_cost, const PlannedPath& incoming) {
  return incoming.length < current_cost ? Decision::Adopt : Decision::Keep;
}

Decision accept_or_keep(const PathCost& current, const PlannedPath& incoming) {
  return accept_or_keep(current.c_new(), incoming);
}

PlannedPath smooth(const PlannedPath& path, const LocalMap& map,
                   bool unknown_is_free) {
  PlannedPath out = path;
  auto& wps = out.waypoints;
  while (wps.size() >= 3 &&
         is_segment_free(map.grid, wps[0], wps[2], /*rim_blocks=*/false,
                         unknown_is_free)) {
    wps.erase(wps.begin() + 1);
  }
  out.length = path_length(wps);
  return out;
}

std::string state_tag(const FollowerState& s) {
  struct {
    std::string operator()(const OnPath&) const { return "on_path"; }
    std::string operator()(const Avoiding&) const { return "avoiding"; }
    std::string operator()(const Completed&) const { return "completed"; }
    std::string operator()(const Failed&) const { return "failed"; }
  } visitor;
  return std::visit(visitor, s);
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Transition:
      return "transition";
    case EventKind::PlanFailed:
      return "plan_failed";
    case EventKind::PlanAdopted:
      return "plan_adopted";
    case EventKind::PlanKept:
      return "plan_kept";
    case EventKind::MapExpanded:
      return "map_expanded";
    case EventKind::TargetSelected:
      return "target_selected";
  }
  return "none";
}

// Follower -----------------------------------------------------------------

Follower::Follower(MissionPlan plan, MissionConfig config, WindowSpec window,
                   PlannerConfig planner, std::uint64_t seed)
    : plan_(std::move(plan)),
      config_(config),
      base_window_(window),
      window_(window),
      planner_(planner),
      rng_(seed) {
  plan_.validate();
  window.validate();
  planner.validate();
  incrementals_ = subdivide(plan_);
  vertices_ = vertex_indices(plan_);
}

std::size_t Follower::leg_end(std::size_t index) const {
  for (std::size_t v : vertices_) {
    if (v >= index) return v;
  }
  return incrementals_.size() - 1;
}

const LocalMap& Follower::build_map(const OccupancyGrid& global,
                                    const Point2& pos, const Point2& target) {
  const Box2 window = compute_window(pos, target, window_.d_corner);
  local_map_ = extract_local_map(global, window, window_.d_safe, window_.rim_width);
  return *local_map_;
}

void Follower::transition(FollowerState next, StepOutput& out) {
  out.events.push_back(
      {EventKind::Transition, state_tag(state_) + "->" + state_tag(next)});
  state_ = std::move(next);
  ++stats_.transitions;
}

void Follower::fail(const std::string& reason, StepOutput& out) {
  transition(Failed{reason}, out);
}

bool Follower::expand(StepOutput& out) {
  const auto next = maximize_map(window_);
  if (!next) return false;
  window_ = *next;
  ++stats_.expansions;
  out.events.push_back({EventKind::MapExpanded, std::to_string(window_.d_corner)});
  return true;
}

bool Follower::remaining_clear(const Point2& pos,
                               const Polyline2& remaining) const {
  if (remaining.empty()) return false;
  const TraversalRules rules{/*rim_blocks=*/false, config_.unknown_is_free};
  const EdgeChecker edges(*local_map_, pos, rules);
  const bool first = edges.root_inside_margin()
                         ? edges.escape_free(pos, remaining.front())
                         : edges.segment_free(pos, remaining.front());
  if (!first) return false;
  for (std::size_t k = 1; k < remaining.size(); ++k) {
    if (!edges.segment_free(remaining[k - 1], remaining[k])) return false;
  }
  return true;
}

Point2 Follower::path_carrot(const Point2& pos,
                            const Polyline2& remaining) const {
  if (config_.carrot_distance <= 0.0) return remaining.front();
  const TraversalRules rules{/*rim_blocks=*/false, config_.unknown_is_free};
  const EdgeChecker edges(*local_map_, pos, rules);
  auto reachable = [&](const Point2& p) {
    return edges.root_inside_margin() ? edges.escape_free(pos, p)
                                      : edges.segment_free(pos, p);
  };
  constexpr double kStep = 0.25;
  Point2 best = remaining.front();
  Point2 from = pos;
  double travelled = 0.0;
  for (const Point2& to : remaining) {
    const double len = (to - from).norm();
    for (double s = kStep; s < len + kStep; s += kStep) {
      const double t = std::min(s, len);
      if (travelled + t > config_.carrot_distance) return best;
      const Point2 p = from + (to - from) * (len > 0.0 ? t / len : 0.0);
      if (!reachable(p)) return best;
      best = p;
    }
    travelled += len;
    from = to;
  }
  return best;
}

StepOutput Follower::step(const OccupancyGrid& global,
                          const VehicleState& vehicle) {
  StepOutput out;
  const Point2 pos = vehicle.position;
  if (std::holds_alternative<OnPath>(state_)) {
    out.setpoint = step_on_path(global, pos, out);
  } else if (std::holds_alternative<Avoiding>(state_)) {
    out.setpoint = step_avoiding(global, pos, out);
  } else if (std::holds_alternative<Completed>(state_)) {
    out.setpoint = incrementals_.back();
  } else {
    out.setpoint = pos;
  }
  return out;
}

Point2 Follower::step_on_path(const OccupancyGrid& global, const Point2& pos,
                              StepOutput& out) {
  const std::size_t last = incrementals_.size() - 1;
  std::size_t i = std::get<OnPath>(state_).next_index;
  auto is_vertex = [&](std::size_t k) {
    return std::find(vertices_.begin(), vertices_.end(), k) != vertices_.end();
  };
  while (i < last) {
    const bool reached = (pos - incrementals_[i]).norm() <= config_.arrival_tolerance;
    bool passed = false;
    if (i > 0 && !is_vertex(i)) {
      const Vector2 dir = incrementals_[i] - incrementals_[i - 1];
      passed = (pos - incrementals_[i]).dot(dir) >= 0.0;
    }
    if (!(reached || passed)) break;
    ++i;
  }
  std::get<OnPath>(state_).next_index = i;
  if (i == last && (pos - incrementals_[last]).norm() <= config_.arrival_tolerance) {
    transition(Completed{}, out);
    return incrementals_[last];
  }

  const std::size_t end = leg_end(i);
  const LocalMap& map = build_map(global, pos, incrementals_[end]);

  if (i > 0 && point_segment_distance<double>(pos, incrementals_[i - 1],
                                              incrementals_[i]) >
                   config_.off_course_threshold) {
    enter_avoiding(global, pos, i, out);
    return std::holds_alternative<Avoiding>(state_) ? step_avoiding(global, pos, out)
                                                    : pos;
  }

  std::size_t carrot = i;
  for (std::size_t k = i; k <= end; ++k) {
    const Point2& from = k == i ? pos : incrementals_[k - 1];
    if (!check_direct(map, from, incrementals_[k], config_.unknown_is_free)) {
      enter_avoiding(global, pos, k, out);
      return std::holds_alternative<Avoiding>(state_)
                 ? step_avoiding(global, pos, out)
                 : pos;
    }
    carrot = k;
  }
  return incrementals_[carrot];
}

void Follower::enter_avoiding(const OccupancyGrid& global, const Point2& pos,
                              std::size_t obstruction_index, StepOutput& out) {
  while (true) {
    const Point2 anchor = incrementals_[leg_end(obstruction_index)];
    const LocalMap& map = build_map(global, pos, anchor);
    const auto target = select_avoidance_target(
        map, incrementals_, obstruction_index, config_.lookahead_min,
        config_.unknown_is_free);
    if (target) {
      out.events.push_back(
          {EventKind::TargetSelected, std::to_string(target->index)});
      transition(Avoiding{std::nullopt, target->point, target->index}, out);
      return;
    }
    if (!expand(out)) {
      fail("no_vacant_waypoint", out);
      return;
    }
  }
}

Point2 Follower::step_avoiding(const OccupancyGrid& global, const Point2& pos,
                               StepOutput& out) {
  Avoiding av = std::get<Avoiding>(state_);
  if ((pos - av.target).norm() <= config_.arrival_tolerance) {
    window_ = base_window_;
    transition(OnPath{av.target_index}, out);
    return step_on_path(global, pos, out);
  }

  const LocalMap* map = &build_map(global, pos, av.target);
  const TraversalRules strict{true, config_.unknown_is_free};
  const auto target_cell = map->grid.world_to_cell(av.target);
  if (!target_cell || !is_passable(map->grid.at(*target_cell), strict)) {
    av.path.reset();
    while (true) {
      const auto next = select_avoidance_target(*map, incrementals_, av.target_index,
                                                config_.lookahead_min,
                                                config_.unknown_is_free);
      if (next) {
        av.target = next->point;
        av.target_index = next->index;
        out.events.push_back({EventKind::TargetSelected, std::to_string(next->index)});
        map = &build_map(global, pos, av.target);
        break;
      }
      if (!expand(out)) {
        fail("no_vacant_waypoint", out);
        return pos;
      }
      map = &build_map(global, pos, av.target);
    }
  }

  if (av.path) {
    auto& wps = *av.path;
    while (wps.size() > 1 && (pos - wps.front()).norm() <= config_.waypoint_reach) {
      wps.erase(wps.begin());
    }
    if (!remaining_clear(pos, wps)) av.path.reset();
  }

  ++stats_.plan_calls;
  const auto t0 = std::chrono::steady_clock::now();
  const PlanResult result = plan(*map, pos, av.target, planner_, rng_);
  stats_.plan_wall_seconds +=
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (result.ok()) {
    ++stats_.plan_successes;
    ceiling_failures_ = 0;
    double current = std::numeric_limits<double>::infinity();
    if (av.path) {
      Polyline2 remaining{pos};
      remaining.insert(remaining.end(), av.path->begin(), av.path->end());
      current = path_cost_current(remaining, *map, config_.rim_weight).c_new();
    }
    if (accept_or_keep(current, *result.path) == Decision::Adopt) {
      av.path = Polyline2(result.path->waypoints.begin() + 1,
                          result.path->waypoints.end());
      if (av.path->empty()) av.path->push_back(av.target);
      ++stats_.adoptions;
      out.events.push_back({EventKind::PlanAdopted, std::to_string(result.path->length)});
    } else {
      out.events.push_back({EventKind::PlanKept, std::to_string(result.path->length)});
    }
  } else {
    out.events.push_back({EventKind::PlanFailed, std::string(to_string(result.failure))});
    if (!av.path && result.failure != PlanFailure::StartBlocked && !expand(out) &&
        ++ceiling_failures_ >= config_.ceiling_retries) {
      fail("no_path", out);
      return pos;
    }
  }

  Point2 setpoint = pos;
  if (av.path) {
    PlannedPath anchored;
    anchored.waypoints.push_back(pos);
    anchored.waypoints.insert(anchored.waypoints.end(), av.path->begin(), av.path->end());
    anchored = smooth(anchored, *map, config_.unknown_is_free);
    av.path = Polyline2(anchored.waypoints.begin() + 1, anchored.waypoints.end());
    setpoint = path_carrot(pos, *av.path);
  }
  state_ = std::move(av);
  return setpoint;
}

}  // namespace avoid
