#include "avoid/world.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "avoid/geometry.hpp"

namespace avoid {
namespace {

double signed_area(const std::vector<Point2>& v) {
  double area = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    area += cross2(v[i], v[(i + 1) % v.size()]);
  }
  return 0.5 * area;
}

}  // namespace

Obstacle::Obstacle(std::vector<Point2> vertices)
    : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) {
    throw std::invalid_argument("obstacle needs at least three vertices");
  }
  for (const Point2& v : vertices_) {
    if (!v.allFinite()) throw std::invalid_argument("non-finite vertex");
  }
  double area = signed_area(vertices_);
  if (std::abs(area) <= 1e-12) {
    throw std::invalid_argument("degenerate obstacle polygon");
  }
  if (area < 0) std::reverse(vertices_.begin(), vertices_.end());
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vector2 e0 = vertices_[(i + 1) % n] - vertices_[i];
    const Vector2 e1 = vertices_[(i + 2) % n] - vertices_[(i + 1) % n];
    if (cross2(e0, e1) < -1e-12) {
      throw std::invalid_argument("obstacle polygon is not convex");
    }
  }
}

Obstacle Obstacle::rectangle(const Box2& box) {
  if (box.isEmpty() || box.volume() <= 0.0) {
    throw std::invalid_argument("empty rectangle obstacle");
  }
  const Point2 lo = box.min();
  const Point2 hi = box.max();
  Obstacle o({lo, Point2(hi.x(), lo.y()), hi, Point2(lo.x(), hi.y())});
  o.box_ = box;
  return o;
}

Obstacle Obstacle::polygon(std::vector<Point2> vertices) {
  return Obstacle(std::move(vertices));
}

Box2 Obstacle::bounding_box() const {
  Box2 b;
  for (const Point2& v : vertices_) b.extend(v);
  return b;
}

bool Obstacle::contains(const Point2& p) const {
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = vertices_[i];
    const Point2& b = vertices_[(i + 1) % n];
    if (cross2(b - a, p - a) < 0.0) return false;
  }
  return true;
}

double Obstacle::distance(const Point2& p) const {
  if (contains(p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance<double>(
                              p, vertices_[i], vertices_[(i + 1) % n]));
  }
  return best;
}

// Cyrus-Beck clipping of the ray against the half-planes of the polygon.
std::optional<double> Obstacle::ray_cast(const Point2& origin,
                                         const Vector2& direction,
                                         double max_range) const {
  double t_enter = 0.0;
  double t_exit = max_range;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = vertices_[i];
    const Vector2 edge = vertices_[(i + 1) % n] - a;
    // Inside is cross(edge, p - a) >= 0.
    const double num = cross2(edge, origin - a);
    const double den = cross2(edge, direction);
    if (den == 0.0) {
      if (num < 0.0) return std::nullopt;
      continue;
    }
    const double t = -num / den;
    if (den > 0.0) {
      t_enter = std::max(t_enter, t);
    } else {
      t_exit = std::min(t_exit, t);
    }
    if (t_enter > t_exit) return std::nullopt;
  }
  if (t_enter > max_range) return std::nullopt;
  return t_enter;
}

std::optional<double> WorldModel::ray_cast(const Point2& origin,
                                           const Vector2& direction,
                                           double max_range) const {
  std::optional<double> best;
  for (const Obstacle& o : obstacles_) {
    const auto t = o.ray_cast(origin, direction, max_range);
    if (t && (!best || *t < *best)) best = t;
  }
  return best;
}

double WorldModel::clearance(const Point2& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Obstacle& o : obstacles_) best = std::min(best, o.distance(p));
  return best;
}

bool WorldModel::inside_obstacle(const Point2& p) const {
  for (const Obstacle& o : obstacles_) {
    if (o.contains(p)) return true;
  }
  return false;
}

bool disc_intersects(const WorldModel& world, const Point2& center,
                     double radius) {
  if (radius < 0.0) throw std::invalid_argument("negative radius");
  return world.clearance(center) <= radius;
}

}  // namespace avoid
