#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <iosfwd>
#include <optional>
#include <vector>

#include "avoid/types.hpp"

namespace avoid {

enum class CellState : std::uint8_t { Unknown, Free, Occupied, OuterRim };

/// Uniform 2D lattice. Cell (i, j) covers
/// [origin.x + i*cell_size, origin.x + (i+1)*cell_size) and the same in y.
/// Storage is row-major: index = j * width + i.
class OccupancyGrid {
 public:
  static constexpr double kDefaultRimValue = 0.5;

  OccupancyGrid(const Point2& origin, double cell_size, int width, int height,
                CellState fill = CellState::Unknown,
                double rim_value = kDefaultRimValue);

  /// Smallest grid with the given resolution whose cells cover box.
  static OccupancyGrid covering(const Box2& box, double cell_size,
                                CellState fill = CellState::Unknown);

  const Point2& origin() const { return origin_; }
  double cell_size() const { return cell_size_; }
  int width() const { return width_; }
  int height() const { return height_; }
  double rim_value() const { return rim_value_; }
  Box2 bounds() const;

  bool contains(const CellIndex& c) const {
    return c.x() >= 0 && c.y() >= 0 && c.x() < width_ && c.y() < height_;
  }
  /// floor((p - origin) / cell_size), or nullopt when outside the lattice.
  std::optional<CellIndex> world_to_cell(const Point2& p) const;
  /// Same as world_to_cell without the bounds check.
  CellIndex unchecked_cell(const Point2& p) const;
  Point2 cell_to_world(const CellIndex& c) const;

  CellState at(const CellIndex& c) const { return cells_[offset(c)]; }
  void set(const CellIndex& c, CellState s) {
    cells_[offset(c)] = s;
    ++revision_;
  }
  /// Occupancy probability: 0 free, rim_value rim, 1 occupied, NaN unknown.
  double occupancy(const CellIndex& c) const;

  std::size_t count(CellState s) const;
  const std::vector<CellState>& cells() const { return cells_; }

  /// Incremented on every mutation.
  std::uint64_t revision() const { return revision_; }
  /// Points dropped by mark_occupied because they fell outside the grid.
  std::size_t out_of_bounds_marks() const { return out_of_bounds_marks_; }
  void note_out_of_bounds_mark() { ++out_of_bounds_marks_; }

  bool operator==(const OccupancyGrid& other) const;

 private:
  std::size_t offset(const CellIndex& c) const {
    return static_cast<std::size_t>(c.y()) * width_ + c.x();
  }

  Point2 origin_;
  double cell_size_;
  int width_;
  int height_;
  double rim_value_;
  std::vector<CellState> cells_;
  std::uint64_t revision_ = 0;
  std::size_t out_of_bounds_marks_ = 0;
};

inline std::optional<CellIndex> world_to_cell(const OccupancyGrid& grid,
                                              const Point2& p) {
  return grid.world_to_cell(p);
}

/// Marks the cell containing p as Occupied. Returns false (and bumps the
/// grid's out-of-bounds counter) when p lies outside the grid.
bool mark_occupied(OccupancyGrid& grid, const Point2& p);

/// Square (Chebyshev) dilation of the Occupied set. Cells within
/// ceil(d_safe / cell_size) cells of an Occupied source become Occupied; the
/// band out to ceil((d_safe + rim_width) / cell_size) becomes OuterRim.
/// Only the Occupied set of the input acts as a source.
OccupancyGrid inflate(const OccupancyGrid& grid, double d_safe,
                      double rim_width);

/// Inflation radius in cells for a metric distance.
int cells_for_distance(double distance, double cell_size);

/// Visits every cell touched by segment ab in order from a to b, including
/// both side cells where the segment passes exactly through a lattice corner.
/// Cells outside the grid are skipped. The visitor returns false to stop.
template <typename Visitor>
void traverse_supercover(const OccupancyGrid& grid, const Point2& a,
                         const Point2& b, Visitor&& visit);

std::vector<CellIndex> supercover_cells(const OccupancyGrid& grid,
                                        const Point2& a, const Point2& b);

enum class SegmentCheck { Free, Blocked, OutOfBounds };

struct TraversalRules {
  bool rim_blocks = true;
  bool unknown_is_free = true;
};

bool is_passable(CellState s, const TraversalRules& rules);

SegmentCheck check_segment(const OccupancyGrid& grid, const Point2& a,
                           const Point2& b, const TraversalRules& rules);

inline bool is_segment_free(const OccupancyGrid& grid, const Point2& a,
                            const Point2& b, bool rim_blocks,
                            bool unknown_is_free = true) {
  return check_segment(grid, a, b, {rim_blocks, unknown_is_free}) ==
         SegmentCheck::Free;
}

/// Distinct OuterRim cells touched by the polyline.
std::size_t count_rim_cells(const OccupancyGrid& grid, const Polyline2& path);

/// Plain PGM (P2), one pixel per cell, top row = highest y.
/// 0 Occupied, 128 OuterRim, 255 Free, 200 Unknown.
void write_pgm(const OccupancyGrid& grid, std::ostream& out);
int pgm_value(CellState s);

// Implementation -----------------------------------------------------------

template <typename Visitor>
void traverse_supercover(const OccupancyGrid& grid, const Point2& a,
                         const Point2& b, Visitor&& visit) {
  const Eigen::Array2d fa = (a - grid.origin()).array() / grid.cell_size();
  const Eigen::Array2d fb = (b - grid.origin()).array() / grid.cell_size();
  const Eigen::Array2d dir = fb - fa;
  CellIndex cell = fa.floor().cast<int>();
  const CellIndex last = fb.floor().cast<int>();

  auto emit = [&](const CellIndex& c) {
    if (!grid.contains(c)) return true;
    return static_cast<bool>(visit(c));
  };
  if (!emit(cell)) return;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kCornerEps = 1e-9;
  int step[2];
  double t_max[2];
  double t_delta[2];
  for (int k = 0; k < 2; ++k) {
    if (dir[k] > 0) {
      step[k] = 1;
      t_delta[k] = 1.0 / dir[k];
      t_max[k] = (cell[k] + 1 - fa[k]) * t_delta[k];
    } else if (dir[k] < 0) {
      step[k] = -1;
      t_delta[k] = -1.0 / dir[k];
      t_max[k] = (fa[k] - cell[k]) * t_delta[k];
    } else {
      step[k] = 0;
      t_delta[k] = kInf;
      t_max[k] = kInf;
    }
  }

  while ((cell != last).any()) {
    const double t = std::min(t_max[0], t_max[1]);
    if (t > 1.0 + kCornerEps) break;
    if (std::abs(t_max[0] - t_max[1]) <= kCornerEps) {
      if (!emit(CellIndex(cell.x() + step[0], cell.y()))) return;
      if (!emit(CellIndex(cell.x(), cell.y() + step[1]))) return;
      cell += CellIndex(step[0], step[1]);
      t_max[0] += t_delta[0];
      t_max[1] += t_delta[1];
    } else if (t_max[0] < t_max[1]) {
      cell.x() += step[0];
      t_max[0] += t_delta[0];
    } else {
      cell.y() += step[1];
      t_max[1] += t_delta[1];
    }
    if (!emit(cell)) return;
  }
}

}  // namespace avoid
