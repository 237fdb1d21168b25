#pragma once

#include <cstdint>
#include <optional>

#include "avoid/grid_map.hpp"

namespace avoid {

struct WindowSpec {
  double d_corner = 4.0;
  double d_safe = 3.0;
  double rim_width = 0.5;
  double expansion_step = 5.0;
  int expansion_count = 0;
  int max_expansions = 6;

  void validate() const;
};

/// Planning map around the drone and its current target.
struct LocalMap {
  OccupancyGrid grid;    // inflated
  OccupancyGrid sensed;  // the same window before inflation
  Box2 window;
  std::uint64_t source_revision = 0;
  /// Inflation depth d_safe + rim width; 0 when unknown.
  double margin = 0.0;
};

/// Bounding box of {drone, target} grown by d_corner on every side.
Box2 compute_window(const Point2& drone, const Point2& target, double d_corner);

/// Grows the box outward to whole-cell boundaries of the lattice.
Box2 snap_to_lattice(const Box2& window, const OccupancyGrid& lattice);

/// Crops the global grid to the (snapped) window and inflates the crop.
/// Occupied cells outside the window do not contribute. Throws
/// std::invalid_argument when the window does not overlap the grid.
LocalMap extract_local_map(const OccupancyGrid& global, const Box2& window,
                           double d_safe, double rim_width);

/// Pushes d_corner out by one expansion step, or nullopt at the ceiling.
std::optional<WindowSpec> maximize_map(const WindowSpec& spec);

}  // namespace avoid
