#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace avoid {

template <typename Scalar>
using Point = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Box = Eigen::AlignedBox<Scalar, 2>;

using Point2 = Point<double>;
using Vector2 = Eigen::Vector2d;
using Box2 = Box<double>;
using CellIndex = Eigen::Array2i;

template <typename Scalar>
using Polyline = std::vector<Point<Scalar>>;

using Polyline2 = Polyline<double>;

}  // namespace avoid
