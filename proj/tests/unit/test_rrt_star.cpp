#include <gtest/gtest.h>

#include <random>

#include "avoid/geometry.hpp"
#include "avoid/rrt_star.hpp"
#include "oracles.hpp"

using namespace avoid;

namespace {

LocalMap as_local(const OccupancyGrid& g) {
  return LocalMap{g, g, g.bounds(), 0, 0.0};
}

OccupancyGrid free_grid(const Point2& origin, int w, int h, double cs = 0.5) {
  return OccupancyGrid(origin, cs, w, h, CellState::Free);
}

int linear_nearest(const Tree& t, const Point2& p) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(t.size()); ++i) {
    if ((t[i].position - p).squaredNorm() < (t[best].position - p).squaredNorm()) best = i;
  }
  return best;
}

std::vector<int> linear_near(const Tree& t, const Point2& p, double r) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(t.size()); ++i) {
    if ((t[i].position - p).squaredNorm() <= r * r) out.push_back(i);
  }
  return out;
}

// Walls with a single 1 m slot; start and goal on opposite sides.
OccupancyGrid corridor_grid() {
  OccupancyGrid g = free_grid(Point2::Zero(), 60, 40);
  for (int j = 0; j < 40; ++j) {
    for (int i = 28; i < 32; ++i) {
      if (j < 18 || j > 19) g.set({i, j}, CellState::Occupied);
    }
  }
  return g;
}

}  // namespace

TEST(Tree, NearestSingleAndTie) {
  Tree t(Box2(Point2(0, 0), Point2(10, 10)), 2.0);
  t.add({5, 5}, -1, 0);
  EXPECT_EQ(t.nearest({9, 9}), 0);
  t.add({3, 5}, 0, 2);
  t.add({7, 5}, 0, 2);
  EXPECT_EQ(t.nearest({5, 5.5}), 0);
  EXPECT_EQ(t.nearest({5.0, 9.0}), 0);
  Tree u(Box2(Point2(0, 0), Point2(10, 10)), 2.0);
  u.add({7, 5}, -1, 0);
  u.add({3, 5}, 0, 4);
  EXPECT_EQ(u.nearest({5, 8}), 0);
}

TEST(Tree, NearestAndNearMatchLinearScan) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-5, 25);
  for (int trial = 0; trial < 20; ++trial) {
    Tree t(Box2(Point2(0, 0), Point2(20, 20)), 2.0);
    t.add({u(rng), u(rng)}, -1, 0);
    for (int k = 1; k < 100; ++k) t.add({u(rng), u(rng)}, 0, 1);
    for (int q = 0; q < 50; ++q) {
      const Point2 p(u(rng), u(rng));
      EXPECT_EQ(t.nearest(p), linear_nearest(t, p));
      for (double r : {0.5, 2.0, 7.0, 100.0}) {
        EXPECT_EQ(t.near(p, r), linear_near(t, p, r));
      }
    }
  }
}

TEST(Tree, NearEdgeCases) {
  Tree t(Box2(Point2(0, 0), Point2(10, 10)), 2.0);
  t.add({1, 1}, -1, 0);
  t.add({2, 2}, 0, 1);
  EXPECT_TRUE(t.near({5, 5}, 1e-9).empty());
  EXPECT_EQ(t.near({1.5, 1.5}, 10.0), (std::vector<int>{0, 1}));
}

TEST(Planner, NearRadiusSchedule) {
  PlannerConfig cfg;
  EXPECT_NEAR(near_radius(cfg, 100), 3.0, 1e-12);
  EXPECT_NEAR(near_radius(cfg, 10), 3.0, 1e-12);
  EXPECT_LT(near_radius(cfg, 1000), near_radius(cfg, 500));
  cfg.near_radius = 1.5;
  EXPECT_EQ(near_radius(cfg, 1000), 1.5);
}

TEST(Planner, SampleFree) {
  const LocalMap m = as_local(free_grid(Point2(-2, -3), 20, 10));
  std::mt19937_64 rng(1);
  PlannerConfig cfg;
  cfg.goal_bias = 1.0;
  for (int k = 0; k < 20; ++k) EXPECT_EQ(*sample_free(m, {1, 1}, cfg, rng), Point2(1, 1));
  cfg.goal_bias = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto p = sample_free(m, {1, 1}, cfg, rng);
    ASSERT_TRUE(p);
    EXPECT_TRUE(m.grid.bounds().contains(*p));
  }
  const LocalMap full = as_local(OccupancyGrid(Point2::Zero(), 0.5, 4, 4, CellState::Occupied));
  EXPECT_FALSE(sample_free(full, {1, 1}, cfg, rng));
}

TEST(Planner, ChooseParentPicksCheapestTotal) {
  const LocalMap m = as_local(free_grid(Point2(-5, -5), 40, 40));
  Tree t(m.grid.bounds(), 2.0);
  t.add({0, 0}, -1, 0);
  t.add({9, 0}, 0, 10.0);  // edge to p = 1
  t.add({10, 4}, 0, 5.0);  // edge to p = 4
  const EdgeChecker edges(m, {0, 0});
  const Point2 p(10, 0);
  const auto choice = choose_parent(t, edges, {1, 2}, p);
  ASSERT_TRUE(choice);
  EXPECT_EQ(choice->parent, 2);
  EXPECT_DOUBLE_EQ(choice->cost, 9.0);
  const auto single = choose_parent(t, edges, {1}, p);
  ASSERT_TRUE(single);
  EXPECT_EQ(single->parent, 1);
}

TEST(Planner, ChooseParentAllBlocked) {
  OccupancyGrid g = free_grid(Point2(-5, -5), 40, 40);
  for (int j = 0; j < 40; ++j) g.set({26, j}, CellState::Occupied);  // x in [8, 8.5)
  const LocalMap m = as_local(g);
  Tree t(m.grid.bounds(), 2.0);
  t.add({0, 0}, -1, 0);
  t.add({7, 1}, 0, 7.1);
  const EdgeChecker edges(m, {0, 0});
  EXPECT_FALSE(choose_parent(t, edges, {0, 1}, {10, 0}));
}

TEST(Planner, RewireTriangle) {
  const LocalMap m = as_local(free_grid(Point2(-5, -5), 60, 30));
  Tree t(m.grid.bounds(), 2.0);
  t.add({0, 0}, -1, 0);
  t.add({4, 3}, 0, 5);
  t.add({8, 0}, 1, 10);
  t.add({12, 0}, 2, 14);
  const int n = t.add({4, 0}, 0, 4);
  const EdgeChecker edges(m, {0, 0});
  EXPECT_EQ(rewire(t, edges, n, {1, 2}), 1);
  EXPECT_EQ(t[2].parent, n);
  EXPECT_NEAR(t[2].cost, 8.0, 1e-12);
  EXPECT_NEAR(t[3].cost, 12.0, 1e-12);
  EXPECT_EQ(t[1].parent, 0);
  EXPECT_EQ(t[1].cost, 5.0);
  EXPECT_EQ(rewire(t, edges, n, {1, 2}), 0);
}

TEST(Planner, RewireBlockedEdge) {
  OccupancyGrid g = free_grid(Point2(-5, -5), 60, 30);
  g.set({22, 10}, CellState::Occupied);  // around (6.25, 0.25)
  const LocalMap m = as_local(g);
  Tree t(m.grid.bounds(), 2.0);
  t.add({0, 0}, -1, 0);
  t.add({4, 3}, 0, 5);
  t.add({8, 0}, 1, 10);
  const int n = t.add({4, 0}, 0, 4);
  const EdgeChecker edges(m, {0, 0});
  EXPECT_EQ(rewire(t, edges, n, {1, 2}), 0);
  EXPECT_EQ(t[2].parent, 1);
  EXPECT_EQ(t[2].cost, 10.0);
}

TEST(Planner, EmptyMapStraightShot) {
  const LocalMap m = as_local(free_grid(Point2(-5, -5), 120, 20));
  const PlanResult r = plan(m, {0, 0}, {50, 0}, PlannerConfig{});
  ASSERT_TRUE(r.ok());
  EXPECT_LE(r.path->length, 52.5);
  EXPECT_EQ(r.path->waypoints.front(), Point2(0, 0));
  EXPECT_EQ(r.path->waypoints.back(), Point2(50, 0));
}

TEST(Planner, GoalBlocked) {
  OccupancyGrid g = free_grid(Point2(-5, -5), 40, 20);
  mark_occupied(g, {10, 0});
  const PlanResult r = plan(as_local(g), {0, 0}, {10, 0}, PlannerConfig{});
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.failure, PlanFailure::GoalBlocked);
}

TEST(Planner, StartOutsideWindow) {
  const PlanResult r = plan(as_local(free_grid(Point2::Zero(), 10, 10)), {-1, 1}, {2, 2},
                            PlannerConfig{});
  EXPECT_EQ(r.failure, PlanFailure::StartBlocked);
}

TEST(Planner, NarrowCorridorNearDijkstra) {
  const OccupancyGrid g = corridor_grid();
  const Point2 start(5.25, 3.25);
  const Point2 goal(25.25, 16.25);
  const double optimum = oracle::dijkstra(
      g, *g.world_to_cell(start), *g.world_to_cell(goal),
      [&](const CellIndex& c) { return g.at(c) == CellState::Free; });
  ASSERT_TRUE(std::isfinite(optimum));
  PlannerConfig cfg;
  cfg.seed = 3;
  const PlanResult r = plan(as_local(g), start, goal, cfg);
  ASSERT_TRUE(r.ok());
  EXPECT_LE(r.path->length, 1.10 * optimum) << "optimum " << optimum;
}

TEST(Planner, PathSegmentsAreFree) {
  const OccupancyGrid g = corridor_grid();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    PlannerConfig cfg;
    cfg.seed = seed;
    cfg.max_iterations = 6000;
    const PlanResult r = plan(as_local(g), {5.25, 3.25}, {25.25, 16.25}, cfg);
    ASSERT_TRUE(r.ok());
    const auto& w = r.path->waypoints;
    for (std::size_t k = 1; k < w.size(); ++k) {
      EXPECT_TRUE(is_segment_free(g, w[k - 1], w[k], true));
    }
    EXPECT_NEAR(r.path->length, path_length(w), 1e-12);
  }
}

TEST(Planner, TreeInvariantsEveryIteration) {
  const OccupancyGrid g = corridor_grid();
  PlannerConfig cfg;
  cfg.seed = 8;
  cfg.record_history = true;
  std::mt19937_64 rng(cfg.seed);
  std::vector<double> previous;
  int checked = 0;
  const PlanResult r = plan(
      as_local(g), {5.25, 3.25}, {25.25, 16.25}, cfg, rng,
      [&](const Tree& t, int) {
        ASSERT_EQ(t[0].parent, -1);
        ASSERT_EQ(t[0].cost, 0.0);
        for (int i = 1; i < static_cast<int>(t.size()); ++i) {
          int hops = 0;
          for (int a = i; a != 0; a = t[a].parent) ASSERT_LE(++hops, static_cast<int>(t.size()));
          const TreeNode& p = t[t[i].parent];
          ASSERT_NEAR(t[i].cost, p.cost + (t[i].position - p.position).norm(), 1e-9);
        }
        for (std::size_t i = 0; i < previous.size(); ++i) {
          ASSERT_LE(t[static_cast<int>(i)].cost, previous[i] + 1e-12);
        }
        previous.clear();
        for (const TreeNode& n : t.nodes()) previous.push_back(n.cost);
        ++checked;
      });
  EXPECT_EQ(checked, cfg.max_iterations);
  ASSERT_TRUE(r.ok());
  const auto& h = r.best_length_history;
  ASSERT_EQ(h.size(), static_cast<std::size_t>(cfg.max_iterations));
  for (std::size_t k = 1; k < h.size(); ++k) EXPECT_LE(h[k], h[k - 1]);
  EXPECT_NEAR(h.back(), r.path->length, 1e-9);
}

TEST(Planner, Deterministic) {
  const OccupancyGrid g = corridor_grid();
  PlannerConfig cfg;
  cfg.seed = 99;
  const PlanResult a = plan(as_local(g), {5.25, 3.25}, {25.25, 16.25}, cfg);
  const PlanResult b = plan(as_local(g), {5.25, 3.25}, {25.25, 16.25}, cfg);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a.path->waypoints, b.path->waypoints);
}

TEST(Planner, EscapeFromInflatedStart) {
  OccupancyGrid global(Point2(-10, -10), 0.5, 60, 40, CellState::Free);
  mark_occupied(global, {2.0, 0.0});
  const LocalMap m = extract_local_map(global, compute_window({0, 0}, {10, 0}, 4.0), 3.0, 0.5);
  ASSERT_EQ(m.grid.at(*m.grid.world_to_cell({0.1, 0.1})), CellState::Occupied);
  PlannerConfig cfg;
  cfg.seed = 5;
  const PlanResult r = plan(m, {0.1, 0.1}, {10, 0}, cfg);
  ASSERT_TRUE(r.ok());
  // Only the first edge may leave inflated space, and never through the source.
  const auto& w = r.path->waypoints;
  for (std::size_t k = 2; k < w.size(); ++k) {
    EXPECT_TRUE(is_segment_free(m.grid, w[k - 1], w[k], true));
  }
  for (const CellIndex& c : supercover_cells(m.sensed, w[0], w[1])) {
    EXPECT_NE(m.sensed.at(c), CellState::Occupied);
  }
}

TEST(Planner, ConfigValidation) {
  PlannerConfig cfg;
  cfg.max_iterations = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = PlannerConfig{};
  cfg.goal_bias = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = PlannerConfig{};
  cfg.near_radius = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}
