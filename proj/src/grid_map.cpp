#include "avoid/grid_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace avoid {

OccupancyGrid::OccupancyGrid(const Point2& origin, double cell_size, int width,
                             int height, CellState fill, double rim_value)
    : origin_(origin),
      cell_size_(cell_size),
      width_(width),
      height_(height),
      rim_value_(rim_value) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("cell_size must be > 0");
  if (width < 1 || height < 1) {
    throw std::invalid_argument("grid dimensions must be >= 1");
  }
  if (!(rim_value > 0.0 && rim_value < 1.0)) {
    throw std::invalid_argument("rim value must lie in (0, 1)");
  }
  cells_.assign(static_cast<std::size_t>(width) * height, fill);
}

OccupancyGrid OccupancyGrid::covering(const Box2& box, double cell_size,
                                      CellState fill) {
  const Vector2 size = box.sizes();
  const int w = std::max(1, static_cast<int>(std::ceil(size.x() / cell_size - 1e-9)));
  const int h = std::max(1, static_cast<int>(std::ceil(size.y() / cell_size - 1e-9)));
  return OccupancyGrid(box.min(), cell_size, w, h, fill);
}

Box2 OccupancyGrid::bounds() const {
  return Box2(origin_,
              origin_ + Vector2(width_ * cell_size_, height_ * cell_size_));
}

CellIndex OccupancyGrid::unchecked_cell(const Point2& p) const {
  return ((p - origin_).array() / cell_size_).floor().cast<int>();
}

std::optional<CellIndex> OccupancyGrid::world_to_cell(const Point2& p) const {
  if (!p.allFinite()) return std::nullopt;
  const Eigen::Array2d f = ((p - origin_).array() / cell_size_).floor();
  if (f.x() < 0 || f.y() < 0 || f.x() >= width_ || f.y() >= height_) {
    return std::nullopt;
  }
  return CellIndex(f.cast<int>());
}

Point2 OccupancyGrid::cell_to_world(const CellIndex& c) const {
  return origin_ + (c.cast<double>() + 0.5).matrix() * cell_size_;
}

double OccupancyGrid::occupancy(const CellIndex& c) const {
  switch (at(c)) {
    case CellState::Free:
      return 0.0;
    case CellState::Occupied:
      return 1.0;
    case CellState::OuterRim:
      return rim_value_;
    case CellState::Unknown:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::size_t OccupancyGrid::count(CellState s) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

bool OccupancyGrid::operator==(const OccupancyGrid& other) const {
  return origin_ == other.origin_ && cell_size_ == other.cell_size_ &&
         width_ == other.width_ && height_ == other.height_ &&
         cells_ == other.cells_;
}

bool mark_occupied(OccupancyGrid& grid, const Point2& p) {
  const auto cell = grid.world_to_cell(p);
  if (!cell) {
    grid.note_out_of_bounds_mark();
    return false;
  }
  if (grid.at(*cell) != CellState::Occupied) {
    grid.set(*cell, CellState::Occupied);
  }
  return true;
}

int cells_for_distance(double distance, double cell_size) {
  if (distance <= 0.0) return 0;
  return static_cast<int>(std::ceil(distance / cell_size - 1e-9));
}

namespace {

// Separable square dilation: a row sweep followed by a column sweep, each a
// sliding-window "any" over 2r+1 cells computed with prefix counts.
std::vector<std::uint8_t> dilate(const std::vector<std::uint8_t>& mask,
                                 int width, int height, int r) {
  if (r == 0) return mask;
  std::vector<std::uint8_t> rows(mask.size(), 0);
  std::vector<int> prefix(std::max(width, height) + 1);
  for (int j = 0; j < height; ++j) {
    const std::size_t base = static_cast<std::size_t>(j) * width;
    prefix[0] = 0;
    for (int i = 0; i < width; ++i) prefix[i + 1] = prefix[i] + mask[base + i];
    for (int i = 0; i < width; ++i) {
      const int lo = std::max(0, i - r);
      const int hi = std::min(width, i + r + 1);
      rows[base + i] = prefix[hi] - prefix[lo] > 0;
    }
  }
  std::vector<std::uint8_t> out(mask.size(), 0);
  for (int i = 0; i < width; ++i) {
    prefix[0] = 0;
    for (int j = 0; j < height; ++j) {
      prefix[j + 1] = prefix[j] + rows[static_cast<std::size_t>(j) * width + i];
    }
    for (int j = 0; j < height; ++j) {
      const int lo = std::max(0, j - r);
      const int hi = std::min(height, j + r + 1);
      out[static_cast<std::size_t>(j) * width + i] = prefix[hi] - prefix[lo] > 0;
    }
  }
  return out;
}

}  // namespace

OccupancyGrid inflate(const OccupancyGrid& grid, double d_safe,
                      double rim_width) {
  if (d_safe < 0.0 || rim_width < 0.0) {
    throw std::invalid_argument("inflation distances must be >= 0");
  }
  const int r_occ = cells_for_distance(d_safe, grid.cell_size());
  const int r_rim = cells_for_distance(d_safe + rim_width, grid.cell_size());

  const auto& cells = grid.cells();
  std::vector<std::uint8_t> sources(cells.size());
  bool any = false;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    sources[k] = cells[k] == CellState::Occupied;
    any = any || sources[k];
  }
  OccupancyGrid out = grid;
  if (!any) return out;

  const auto occupied = dilate(sources, grid.width(), grid.height(), r_occ);
  std::vector<std::uint8_t> rim;
  if (r_rim > r_occ) rim = dilate(sources, grid.width(), grid.height(), r_rim);

  for (int j = 0; j < grid.height(); ++j) {
    for (int i = 0; i < grid.width(); ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * grid.width() + i;
      const CellIndex c(i, j);
      if (occupied[k]) {
        if (out.at(c) != CellState::Occupied) out.set(c, CellState::Occupied);
      } else if (!rim.empty() && rim[k] && out.at(c) != CellState::Occupied) {
        out.set(c, CellState::OuterRim);
      }
    }
  }
  return out;
}

std::vector<CellIndex> supercover_cells(const OccupancyGrid& grid,
                                        const Point2& a, const Point2& b) {
  std::vector<CellIndex> cells;
  traverse_supercover(grid, a, b, [&](const CellIndex& c) {
    cells.push_back(c);
    return true;
  });
  return cells;
}

bool is_passable(CellState s, const TraversalRules& rules) {
  switch (s) {
    case CellState::Free:
      return true;
    case CellState::Unknown:
      return rules.unknown_is_free;
    case CellState::OuterRim:
      return !rules.rim_blocks;
    case CellState::Occupied:
      return false;
  }
  return false;
}

SegmentCheck check_segment(const OccupancyGrid& grid, const Point2& a,
                           const Point2& b, const TraversalRules& rules) {
  if (!grid.world_to_cell(a) || !grid.world_to_cell(b)) {
    return SegmentCheck::OutOfBounds;
  }
  bool free = true;
  traverse_supercover(grid, a, b, [&](const CellIndex& c) {
    free = is_passable(grid.at(c), rules);
    return free;
  });
  return free ? SegmentCheck::Free : SegmentCheck::Blocked;
}

std::size_t count_rim_cells(const OccupancyGrid& grid, const Polyline2& path) {
  if (path.empty()) return 0;
  std::vector<std::size_t> seen;
  auto visit = [&](const CellIndex& c) {
    if (grid.at(c) == CellState::OuterRim) {
      seen.push_back(static_cast<std::size_t>(c.y()) * grid.width() + c.x());
    }
    return true;
  };
  if (path.size() == 1) {
    traverse_supercover(grid, path[0], path[0], visit);
  }
  for (std::size_t k = 1; k < path.size(); ++k) {
    traverse_supercover(grid, path[k - 1], path[k], visit);
  }
  std::sort(seen.begin(), seen.end());
  return static_cast<std::size_t>(
      std::unique(seen.begin(), seen.end()) - seen.begin());
}

int pgm_value(CellState s) {
  switch (s) {
    case CellState::Occupied:
      return 0;
    case CellState::OuterRim:
      return 128;
    case CellState::Free:
      return 255;
    case CellState::Unknown:
      break;
  }
  return 200;
}

void write_pgm(const OccupancyGrid& grid, std::ostream& out) {
  out << "P2\n" << grid.width() << ' ' << grid.height() << "\n255\n";
  for (int j = grid.height() - 1; j >= 0; --j) {
    for (int i = 0; i < grid.width(); ++i) {
      if (i) out << ' ';
      out << pgm_value(grid.at(CellIndex(i, j)));
    }
    out << '\n';
  }
}

}  // namespace avoid
