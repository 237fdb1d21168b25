#pragma once

#include <optional>
#include <vector>

#include "avoid/types.hpp"

namespace avoid {

/// Convex obstacle with counter-clockwise vertices. Rectangles are stored as
/// four-vertex polygons and remember their box for export.
class Obstacle {
 public:
  static Obstacle rectangle(const Box2& box);
  static Obstacle polygon(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::optional<Box2>& box() const { return box_; }
  Box2 bounding_box() const;

  bool contains(const Point2& p) const;
  /// Euclidean distance from p to the obstacle; zero inside.
  double distance(const Point2& p) const;
  /// Distance along the unit ray to the first boundary crossing, if within
  /// max_range. A ray starting inside reports zero.
  std::optional<double> ray_cast(const Point2& origin, const Vector2& direction,
                                 double max_range) const;

 private:
  explicit Obstacle(std::vector<Point2> vertices);

  std::vector<Point2> vertices_;
  std::optional<Box2> box_;
};

/// Ground-truth geometry the simulated sensor observes.
class WorldModel {
 public:
  explicit WorldModel(const Box2& bounds) : bounds_(bounds) {}

  void add(Obstacle obstacle) { obstacles_.push_back(std::move(obstacle)); }

  const Box2& bounds() const { return bounds_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }

  std::optional<double> ray_cast(const Point2& origin,
                                 const Vector2& direction,
                                 double max_range) const;
  /// Minimum distance from p to any obstacle (infinity for an empty world).
  double clearance(const Point2& p) const;
  bool inside_obstacle(const Point2& p) const;

 private:
  Box2 bounds_;
  std::vector<Obstacle> obstacles_;
};

/// True iff the closed disc around center touches any obstacle.
bool disc_intersects(const WorldModel& world, const Point2& center,
                     double radius);

}  // namespace avoid
