#include "avoid/local_window.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace avoid {

void WindowSpec::validate() const {
  if (d_corner < d_safe) {
    throw std::invalid_argument("d_corner must be at least d_safe");
  }
  if (!(expansion_step > 0.0)) {
    throw std::invalid_argument("expansion_step must be > 0");
  }
  if (d_safe < 0.0 || rim_width < 0.0 || max_expansions < 0) {
    throw std::invalid_argument("invalid window spec");
  }
}

Box2 compute_window(const Point2& drone, const Point2& target,
                    double d_corner) {
  if (!(d_corner > 0.0)) throw std::invalid_argument("d_corner must be > 0");
  Box2 box(drone);
  box.extend(target);
  const Vector2 margin = Vector2::Constant(d_corner);
  return Box2(box.min() - margin, box.max() + margin);
}

Box2 snap_to_lattice(const Box2& window, const OccupancyGrid& lattice) {
  const double cs = lattice.cell_size();
  const Eigen::Array2d lo =
      ((window.min() - lattice.origin()).array() / cs + 1e-9).floor();
  const Eigen::Array2d hi =
      ((window.max() - lattice.origin()).array() / cs - 1e-9).ceil();
  return Box2(lattice.origin() + (lo * cs).matrix(),
              lattice.origin() + (hi * cs).matrix());
}

LocalMap extract_local_map(const OccupancyGrid& global, const Box2& window,
                           double d_safe, double rim_width) {
  const Box2 clipped = snap_to_lattice(window, global).intersection(global.bounds());
  if (clipped.isEmpty() || clipped.sizes().minCoeff() < 0.5 * global.cell_size()) {
    throw std::invalid_argument("window does not overlap the global grid");
  }
  const double cs = global.cell_size();
  const CellIndex first = ((clipped.min() - global.origin()).array() / cs)
                              .round()
                              .cast<int>();
  const CellIndex last = ((clipped.max() - global.origin()).array() / cs)
                             .round()
                             .cast<int>();
  const int w = last.x() - first.x();
  const int h = last.y() - first.y();
  if (w < 1 || h < 1) {
    throw std::invalid_argument("window does not overlap the global grid");
  }

  OccupancyGrid crop(global.origin() + (first.cast<double>() * cs).matrix(), cs,
                     w, h, CellState::Unknown, global.rim_value());
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const CellState s = global.at(first + CellIndex(i, j));
      if (s != CellState::Unknown) crop.set(CellIndex(i, j), s);
    }
  }
  OccupancyGrid inflated = inflate(crop, d_safe, rim_width);
  const Box2 bounds = crop.bounds();
  return LocalMap{std::move(inflated), std::move(crop), bounds,
                  global.revision(), d_safe + rim_width};
}

std::optional<WindowSpec> maximize_map(const WindowSpec& spec) {
  if (spec.expansion_count >= spec.max_expansions) return std::nullopt;
  WindowSpec next = spec;
  next.d_corner += spec.expansion_step;
  ++next.expansion_count;
  return next;
}

}  // namespace avoid
