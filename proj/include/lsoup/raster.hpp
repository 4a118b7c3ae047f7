#pragma once

#include "lsoup/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace lsoup {

using CellIndex = Eigen::Vector2i;
using OccupancyGrid = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr std::int64_t kDefaultCellBudget = std::int64_t{1} << 26;

/// Global cell (i, j) is centred at (i h, j h), so grids sharing h are
/// always aligned and a lattice of spacing h maps vertices onto cell centres.
struct GridFrame {
  double h = 1.0;
  CellIndex lo = CellIndex::Zero();
  int width = 0;
  int height = 0;

  CellIndex hi() const { return lo + CellIndex(width - 1, height - 1); }
  bool inside(const CellIndex& g) const {
    return g.x() >= lo.x() && g.y() >= lo.y() && g.x() < lo.x() + width && g.y() < lo.y() + height;
  }
  Point center(const CellIndex& g) const { return g.cast<double>() * h; }
  std::int64_t cell_count() const { return static_cast<std::int64_t>(width) * height; }

  /// Smallest frame covering both.
  GridFrame united(const GridFrame& other) const;
  GridFrame grown(int margin) const;
};

CellIndex cell_of(const Point& p, double h);

/// Frame covering an axis box with the given empty margin (in cells).
GridFrame frame_for(const Eigen::AlignedBox2d& box, double h, int margin = 1,
                    std::int64_t cell_budget = kDefaultCellBudget);

/// Occupancy bit grid over a frame. Cells addressed by global index unless
/// noted otherwise.
class RasterSet {
 public:
  RasterSet() = default;
  explicit RasterSet(const GridFrame& frame);

  const GridFrame& frame() const { return frame_; }
  double spacing() const { return frame_.h; }
  int width() const { return frame_.width; }
  int height() const { return frame_.height; }
  /// Lower-left corner of the grid in the plane.
  Point origin() const { return (frame_.lo.cast<double>().array() - 0.5).matrix() * frame_.h; }

  bool test(const CellIndex& g) const {
    return frame_.inside(g) && cells_(g.x() - frame_.lo.x(), g.y() - frame_.lo.y()) != 0;
  }
  void set(const CellIndex& g, bool value = true);

  const OccupancyGrid& cells() const { return cells_; }
  OccupancyGrid& cells() { return cells_; }

  std::int64_t count() const;
  bool empty() const { return count() == 0; }
  /// No occupied cell on the outermost ring.
  bool frame_intact() const;
  std::vector<CellIndex> occupied() const;
  std::vector<Point> centers() const;
  /// Tight box of occupied cells (global indices); undefined when empty.
  Eigen::AlignedBox2i occupied_bounds() const;

  /// Same cells on another frame; cells falling outside are dropped.
  RasterSet reframed(const GridFrame& frame) const;

  friend bool operator==(const RasterSet& a, const RasterSet& b);

 private:
  GridFrame frame_;
  OccupancyGrid cells_;
};

/// Conservative supercover: every cell whose closed square meets a segment.
void rasterize_polyline(std::span<const Point> points, RasterSet& target);

/// Rasterizes loops onto a fresh frame with a one-cell empty margin.
RasterSet rasterize(std::span<const Loop> loops, double h, std::int64_t cell_budget = kDefaultCellBudget);
RasterSet rasterize(std::span<const Loop* const> loops, double h, std::int64_t cell_budget = kDefaultCellBudget);
RasterSet rasterize_points(std::span<const Point> points, double h, std::int64_t cell_budget = kDefaultCellBudget);

/// Cells of the frame whose centre lies in the (open) domain.
RasterSet rasterize_domain(const Domain& domain, double h, int margin = 1);

/// Cell-wise set algebra on a shared frame (second operand is reframed).
RasterSet set_union(const RasterSet& a, const RasterSet& b);
RasterSet set_difference(const RasterSet& a, const RasterSet& b);
RasterSet set_intersection(const RasterSet& a, const RasterSet& b);

}  // namespace lsoup
