#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "avoid/local_window.hpp"

namespace avoid {

struct PlannerConfig {
  int max_iterations = 2000;
  /// Longest edge a single extension may add.
  double path_resolution = 1.0;
  /// Probability of using the goal itself as the random sample.
  double goal_bias = 0.1;
  /// Fixed near-neighbour radius. Unset selects the shrinking ball.
  std::optional<double> near_radius;
  double goal_tolerance = 1.0;
  std::uint64_t seed = 0;
  bool record_history = false;

  void validate() const;
};

struct TreeNode {
  Point2 position;
  int parent = -1;
  double cost = 0.0;
};

/// Search tree with a bucket index over a fixed extent. Nodes outside the
/// extent are filed under the nearest border bucket.
class Tree {
 public:
  Tree(const Box2& extent, double bucket_size);

  int add(const Point2& position, int parent, double cost);
  /// Moves node under new_parent and recomputes costs for its subtree.
  void reparent(int node, int new_parent);

  std::size_t size() const { return nodes_.size(); }
  const TreeNode& operator[](int i) const { return nodes_[i]; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const std::vector<int>& children(int i) const { return children_[i]; }

  /// Closest node; ties go to the lowest index. Tree must be non-empty.
  int nearest(const Point2& p) const;
  /// Sorted indices of all nodes within radius (inclusive).
  std::vector<int> near(const Point2& p, double radius) const;

 private:
  Eigen::Array2i bucket_of(const Point2& p) const;
  std::size_t bucket_offset(const Eigen::Array2i& b) const {
    return static_cast<std::size_t>(b.y()) * dims_.x() + b.x();
  }

  Point2 origin_;
  double bucket_size_;
  Eigen::Array2i dims_;
  std::vector<std::vector<int>> buckets_;
  std::vector<TreeNode> nodes_;
  std::vector<std::vector<int>> children_;
};

/// inside the inflated margin as long as they cross no sensed cell other than
/// the start cell, reach passable space within the inflation depth and stay
/// clear from there on.
class EdgeChecker {
 public:
  EdgeChecker(const LocalMap& map, const Point2& root,
              TraversalRules rules = {});

  bool segment_free(const Point2& a, const Point2& b) const;
  bool escape_free(const Point2& a, const Point2& b) const;
  bool connects(const Tree& tree, int from, const Point2& to) const;
  bool root_inside_margin() const { return root_escape_; }

 private:
  const LocalMap& map_;
  TraversalRules rules_;
  bool root_escape_ = false;
  double escape_limit_ = std::numeric_limits<double>::infinity();
};

enum class PlanFailure { BudgetExhausted, MapSaturated, GoalBlocked, StartBlocked };

std::string_view to_string(PlanFailure f);

struct PlannedPath {
  Polyline2 waypoints;
  double length = 0.0;
};

struct PlanResult {
  std::optional<PlannedPath> path;
  PlanFailure failure = PlanFailure::BudgetExhausted;
  int iterations = 0;
  std::size_t tree_size = 0;
  /// Best connected length after each iteration (infinity before the first
  /// connection). Filled only when PlannerConfig::record_history is set.
  std::vector<double> best_length_history;

  bool ok() const { return path.has_value(); }
};

using IterationObserver = std::function<void(const Tree&, int iteration)>;

/// Shrinking-ball radius min(gamma * sqrt(ln n / n), 3 * path_resolution)
/// with gamma chosen so the radius at n = 100 is 3 * path_resolution.
double near_radius(const PlannerConfig& cfg, std::size_t tree_size);

/// Goal with probability goal_bias, else a uniform point in the map whose
/// cell is not Occupied. nullopt after 10^4 consecutive rejections.
std::optional<Point2> sample_free(const LocalMap& map, const Point2& goal,
                                  const PlannerConfig& cfg,
                                  std::mt19937_64& rng);

inline int nearest(const Tree& tree, const Point2& p) { return tree.nearest(p); }

inline std::vector<int> near_nodes(const Tree& tree, const Point2& p,
                                   double radius) {
  return tree.near(p, radius);
}

struct ParentChoice {
  int parent;
  double cost;
};

std::optional<ParentChoice> choose_parent(const Tree& tree,
                                          const EdgeChecker& edges,
                                          const std::vector<int>& candidates,
                                          const Point2& p);

/// Reparents candidates through new_index where that shortens them.
/// Returns the number of reparented nodes.
int rewire(Tree& tree, const EdgeChecker& edges, int new_index,
           const std::vector<int>& candidates);

PlanResult plan(const LocalMap& map, const Point2& start, const Point2& goal,
                const PlannerConfig& cfg);

PlanResult plan(const LocalMap& map, const Point2& start, const Point2& goal,
                const PlannerConfig& cfg, std::mt19937_64& rng,
                const IterationObserver& observer = {});

}  // namespace avoid
