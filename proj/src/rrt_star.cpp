#include "avoid/rrt_star.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "avoid/geometry.hpp"

namespace avoid {

void PlannerConfig::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("max_iterations < 1");
  if (!(goal_bias >= 0.0 && goal_bias <= 1.0)) {
    throw std::invalid_argument("goal_bias must lie in [0, 1]");
  }
  if (!(path_resolution > 0.0)) {
    throw std::invalid_argument("path_resolution must be > 0");
  }
  if (near_radius && !(*near_radius > 0.0)) {
    throw std::invalid_argument("near_radius must be > 0");
  }
  if (!(goal_tolerance >= 0.0)) {
    throw std::invalid_argument("goal_tolerance must be >= 0");
  }
}

std::string_view to_string(PlanFailure f) {
  switch (f) {
    case PlanFailure::BudgetExhausted:
      return "budget_exhausted";
    case PlanFailure::MapSaturated:
      return "map_saturated";
    case PlanFailure::GoalBlocked:
      return "goal_blocked";
    case PlanFailure::StartBlocked:
      return "start_blocked";
  }
  return "unknown";
}

// Tree ---------------------------------------------------------------------

Tree::Tree(const Box2& extent, double bucket_size)
    : origin_(extent.min()), bucket_size_(bucket_size) {
  if (!(bucket_size > 0.0)) throw std::invalid_argument("bucket_size <= 0");
  const Vector2 sizes = extent.isEmpty() ? Vector2(Vector2::Zero()) : Vector2(extent.sizes());
  dims_ = (sizes.array() / bucket_size).ceil().cast<int>().max(1);
  buckets_.resize(static_cast<std::size_t>(dims_.x()) * dims_.y());
}

Eigen::Array2i Tree::bucket_of(const Point2& p) const {
  const Eigen::Array2d f = ((p - origin_).array() / bucket_size_).floor();
  Eigen::Array2i b;
  for (int k = 0; k < 2; ++k) {
    b[k] = static_cast<int>(std::clamp(f[k], 0.0, double(dims_[k] - 1)));
  }
  return b;
}

int Tree::add(const Point2& position, int parent, double cost) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back({position, parent, cost});
  children_.emplace_back();
  if (parent >= 0) children_[parent].push_back(index);
  buckets_[bucket_offset(bucket_of(position))].push_back(index);
  return index;
}

void Tree::reparent(int node, int new_parent) {
  auto& old_children = children_[nodes_[node].parent];
  old_children.erase(std::find(old_children.begin(), old_children.end(), node));
  nodes_[node].parent = new_parent;
  children_[new_parent].push_back(node);

  std::vector<int> stack{node};
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    const TreeNode& p = nodes_[nodes_[i].parent];
    nodes_[i].cost = p.cost + (nodes_[i].position - p.position).norm();
    for (int c : children_[i]) stack.push_back(c);
  }
}

int Tree::nearest(const Point2& p) const {
  if (nodes_.empty()) throw std::logic_error("nearest on empty tree");
  const Eigen::Array2i center = bucket_of(p);
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  const int max_ring = dims_.maxCoeff();
  for (int ring = 0; ring <= max_ring; ++ring) {
    for (int dy = -ring; dy <= ring; ++dy) {
      const int y = center.y() + dy;
      if (y < 0 || y >= dims_.y()) continue;
      const bool edge_row = std::abs(dy) == ring;
      for (int dx = -ring; dx <= ring; dx += edge_row ? 1 : 2 * std::max(ring, 1)) {
        const int x = center.x() + dx;
        if (x < 0 || x >= dims_.x()) continue;
        for (int i : buckets_[bucket_offset({x, y})]) {
          const double d2 = (nodes_[i].position - p).squaredNorm();
          if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
            best_d2 = d2;
            best = i;
          }
        }
      }
    }
    // Buckets beyond this ring are at least ring * bucket_size away.
    if (best >= 0) {
      const double bound = ring * bucket_size_;
      if (bound * bound > best_d2) break;
    }
  }
  return best;
}

std::vector<int> Tree::near(const Point2& p, double radius) const {
  std::vector<int> out;
  out.reserve(64);
  const Eigen::Array2i lo = bucket_of(p - Vector2::Constant(radius));
  const Eigen::Array2i hi = bucket_of(p + Vector2::Constant(radius));
  const double r2 = radius * radius;
  for (int y = lo.y(); y <= hi.y(); ++y) {
    for (int x = lo.x(); x <= hi.x(); ++x) {
      for (int i : buckets_[bucket_offset({x, y})]) {
        if ((nodes_[i].position - p).squaredNorm() <= r2) out.push_back(i);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Edges --------------------------------------------------------------------

EdgeChecker::EdgeChecker(const LocalMap& map, const Point2& root,
                         TraversalRules rules)
    : map_(map), rules_(rules) {
  if (map.margin > 0.0) {
    escape_limit_ = map.margin + std::sqrt(2.0) * map.grid.cell_size();
  }
  if (auto c = map.grid.world_to_cell(root)) {
    root_escape_ = !is_passable(map.grid.at(*c), rules_);
  }
}

bool EdgeChecker::segment_free(const Point2& a, const Point2& b) const {
  return check_segment(map_.grid, a, b, rules_) == SegmentCheck::Free;
}

bool EdgeChecker::escape_free(const Point2& a, const Point2& b) const {
  const auto first = map_.grid.world_to_cell(a);
  if (!first || !map_.grid.world_to_cell(b)) return false;
  bool escaping = true;
  bool ok = true;
  traverse_supercover(map_.grid, a, b, [&](const CellIndex& c) {
    const bool passable = is_passable(map_.grid.at(c), rules_);
    if (escaping && !passable) {
      // The start cell itself may hold a sensed return.
      ok = (c == *first).all() || map_.sensed.at(c) != CellState::Occupied;
      return ok;
    }
    if (escaping) {
      // Leave the margin the short way; a long run of unsensed inflated
      // cells is more likely a gap between obstacles than a way out.
      const double cs = map_.grid.cell_size();
      const Point2 lo = map_.grid.origin() + (c.cast<double>() * cs).matrix();
      const Box2 cell(lo, lo + Vector2::Constant(cs));
      ok = cell.exteriorDistance(a) <= escape_limit_;
      if (!ok) return false;
    }
    escaping = false;
    ok = passable;
    return ok;
  });
  return ok && !escaping;
}

bool EdgeChecker::connects(const Tree& tree, int from, const Point2& to) const {
  const Point2& a = tree[from].position;
  if (from == 0 && root_escape_) return escape_free(a, to);
  return segment_free(a, to);
}

// Operations ---------------------------------------------------------------

double near_radius(const PlannerConfig& cfg, std::size_t tree_size) {
  if (cfg.near_radius) return *cfg.near_radius;
  const double cap = 3.0 * cfg.path_resolution;
  const double gamma = cap / std::sqrt(std::log(100.0) / 100.0);
  const double n = static_cast<double>(std::max<std::size_t>(tree_size, 2));
  return std::min(gamma * std::sqrt(std::log(n) / n), cap);
}

std::optional<Point2> sample_free(const LocalMap& map, const Point2& goal,
                                  const PlannerConfig& cfg,
                                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (cfg.goal_bias > 0.0 && unit(rng) < cfg.goal_bias) return goal;
  const Box2 box = map.grid.bounds();
  std::uniform_real_distribution<double> ux(box.min().x(), box.max().x());
  std::uniform_real_distribution<double> uy(box.min().y(), box.max().y());
  constexpr int kMaxRejections = 10000;
  for (int k = 0; k < kMaxRejections; ++k) {
    const Point2 p(ux(rng), uy(rng));
    const auto cell = map.grid.world_to_cell(p);
    if (cell && map.grid.at(*cell) != CellState::Occupied) return p;
  }
  return std::nullopt;
}

std::optional<ParentChoice> choose_parent(const Tree& tree,
                                          const EdgeChecker& edges,
                                          const std::vector<int>& candidates,
                                          const Point2& p) {
  std::optional<ParentChoice> best;
  for (int c : candidates) {
    const double cost = tree[c].cost + (tree[c].position - p).norm();
    if (best && cost >= best->cost) continue;
    if (!edges.connects(tree, c, p)) continue;
    best = ParentChoice{c, cost};
  }
  return best;
}

int rewire(Tree& tree, const EdgeChecker& edges, int new_index,
           const std::vector<int>& candidates) {
  int changed = 0;
  for (int c : candidates) {
    if (c == new_index || c == 0 || tree[new_index].parent == c) continue;
    const double via_new =
        tree[new_index].cost + (tree[new_index].position - tree[c].position).norm();
    if (!(via_new < tree[c].cost)) continue;
    if (!edges.segment_free(tree[new_index].position, tree[c].position)) continue;
    tree.reparent(c, new_index);
    ++changed;
  }
  return changed;
}

PlanResult plan(const LocalMap& map, const Point2& start, const Point2& goal,
                const PlannerConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  return plan(map, start, goal, cfg, rng);
}

PlanResult plan(const LocalMap& map, const Point2& start, const Point2& goal,
                const PlannerConfig& cfg, std::mt19937_64& rng,
                const IterationObserver& observer) {
  cfg.validate();
  PlanResult result;
  const OccupancyGrid& grid = map.grid;

  const auto start_cell = grid.world_to_cell(start);
  if (!start_cell) {
    result.failure = PlanFailure::StartBlocked;
    return result;
  }
  const auto goal_cell = grid.world_to_cell(goal);
  if (!goal_cell || !is_passable(grid.at(*goal_cell), TraversalRules{})) {
    result.failure = PlanFailure::GoalBlocked;
    return result;
  }

  Tree tree(grid.bounds(), 2.0 * cfg.path_resolution);
  tree.add(start, -1, 0.0);
  const EdgeChecker edges(map, start);

  std::vector<int> goal_nodes;
  auto try_goal = [&](int index) {
    if ((tree[index].position - goal).norm() <= cfg.goal_tolerance &&
        edges.connects(tree, index, goal)) {
      goal_nodes.push_back(index);
    }
  };
  auto best_goal = [&]() -> std::pair<int, double> {
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int i : goal_nodes) {
      const double c = tree[i].cost + (tree[i].position - goal).norm();
      if (c < best_cost) {
        best_cost = c;
        best = i;
      }
    }
    return {best, best_cost};
  };

  try_goal(0);
  bool saturated = false;
  int iteration = 0;
  for (; iteration < cfg.max_iterations; ++iteration) {
    const auto sample = sample_free(map, goal, cfg, rng);
    if (!sample) {
      saturated = true;
      break;
    }
    const int near_index = tree.nearest(*sample);
    // A sample on an existing node adds nothing but still counts.
    const bool duplicate = tree[near_index].position == *sample;
    // Escape edges out of an inflated start are not length limited: tree
    // nodes never sit in inflated cells, so a short step could not leave.
    const Point2 candidate =
        duplicate || (near_index == 0 && edges.root_inside_margin())
            ? *sample
            : steer<double>(tree[near_index].position, *sample, cfg.path_resolution);
    if (!duplicate && edges.connects(tree, near_index, candidate)) {
      std::vector<int> near =
          tree.near(candidate, near_radius(cfg, tree.size()));
      if (!std::binary_search(near.begin(), near.end(), near_index)) {
        near.insert(std::lower_bound(near.begin(), near.end(), near_index),
                    near_index);
      }
      if (auto parent = choose_parent(tree, edges, near, candidate)) {
        const int index = tree.add(candidate, parent->parent, parent->cost);
        rewire(tree, edges, index, near);
        try_goal(index);
      }
    }
    if (cfg.record_history) {
      result.best_length_history.push_back(best_goal().second);
    }
    if (observer) observer(tree, iteration);
  }

  result.iterations = iteration;
  result.tree_size = tree.size();
  const auto [best, best_cost] = best_goal();
  if (best < 0) {
    result.failure =
        saturated ? PlanFailure::MapSaturated : PlanFailure::BudgetExhausted;
    return result;
  }
  PlannedPath path;
  for (int i = best; i >= 0; i = tree[i].parent) {
    path.waypoints.push_back(tree[i].position);
  }
  std::reverse(path.waypoints.begin(), path.waypoints.end());
  if (path.waypoints.back() != goal) path.waypoints.push_back(goal);
  path.length = path_length(path.waypoints);
  (void)best_cost;
  result.path = std::move(path);
  return result;
}

}  // namespace avoid
