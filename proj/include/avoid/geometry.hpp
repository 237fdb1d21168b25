#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "avoid/types.hpp"

namespace avoid {

/// Sum of Euclidean segment lengths. Zero for fewer than two points.
template <typename Scalar>
Scalar path_length(const Polyline<Scalar>& points) {
  Scalar total(0);
  for (std::size_t i = 1; i < points.size(); ++i) {
    total += (points[i] - points[i - 1]).norm();
  }
  return total;
}

/// Point on the segment from -> to at distance min(max_step, |to - from|).
template <typename Scalar>
Point<Scalar> steer(const Point<Scalar>& from, const Point<Scalar>& to,
                    Scalar max_step) {
  const Point<Scalar> delta = to - from;
  const Scalar dist = delta.norm();
  if (dist == Scalar(0)) {
    throw std::invalid_argument("steer: coincident endpoints");
  }
  if (dist <= max_step) return to;
  return from + delta * (max_step / dist);
}

/// Distance from p to the closed segment [a, b].
template <typename Scalar>
Scalar point_segment_distance(const Point<Scalar>& p, const Point<Scalar>& a,
                              const Point<Scalar>& b) {
  const Point<Scalar> ab = b - a;
  const Scalar len2 = ab.squaredNorm();
  if (len2 == Scalar(0)) return (p - a).norm();
  Scalar t = (p - a).dot(ab) / len2;
  t = std::clamp(t, Scalar(0), Scalar(1));
  return (p - (a + t * ab)).norm();
}

/// Signed lateral offset of p from the infinite line through a, b
/// (positive to the left of a -> b).
template <typename Scalar>
Scalar lateral_offset(const Point<Scalar>& p, const Point<Scalar>& a,
                      const Point<Scalar>& b) {
  const Point<Scalar> ab = b - a;
  const Scalar len = ab.norm();
  if (len == Scalar(0)) return (p - a).norm();
  const Point<Scalar> ap = p - a;
  return (ab.x() * ap.y() - ab.y() * ap.x()) / len;
}

inline double cross2(const Vector2& a, const Vector2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace avoid
