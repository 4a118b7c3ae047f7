#include "lsoup/raster.hpp"

#include <cmath>
#include <sstream>

namespace lsoup {
namespace {

// Lowest index whose closed unit cell [r, r+1] contains v.
inline int closed_floor_lo(double v) { return static_cast<int>(std::ceil(v)) - 1; }
inline int closed_floor_hi(double v) { return static_cast<int>(std::floor(v)); }

void supercover_segment(const Point& p, const Point& q, RasterSet& target) {
  const double h = target.spacing();
  const double x0 = p.x() / h + 0.5, y0 = p.y() / h + 0.5;
  const double x1 = q.x() / h + 0.5, y1 = q.y() / h + 0.5;
  const double xmin = std::min(x0, x1), xmax = std::max(x0, x1);

  const auto mark_column = [&](int c, double ylo, double yhi) {
    for (int r = closed_floor_lo(ylo); r <= closed_floor_hi(yhi); ++r) target.set(CellIndex(c, r));
  };

  if (xmin == xmax) {
    const double ylo = std::min(y0, y1), yhi = std::max(y0, y1);
    for (int c = closed_floor_lo(xmin); c <= closed_floor_hi(xmax); ++c) mark_column(c, ylo, yhi);
    return;
  }
  const auto y_at = [&](double x) {
    if (x == x0) return y0;
    if (x == x1) return y1;
    return y0 + (x - x0) * (y1 - y0) / (x1 - x0);
  };
  for (int c = closed_floor_lo(xmin); c <= closed_floor_hi(xmax); ++c) {
    const double xa = std::max(static_cast<double>(c), xmin);
    const double xb = std::min(static_cast<double>(c) + 1.0, xmax);
    if (xa > xb) continue;
    const double ya = y_at(xa), yb = y_at(xb);
    mark_column(c, std::min(ya, yb), std::max(ya, yb));
  }
}

template <typename LoopRange, typename Deref>
RasterSet rasterize_loops(const LoopRange& loops, Deref deref, double h, std::int64_t cell_budget) {
  if (!(h > 0.0)) throw Error(Errc::invalid_argument, "raster spacing must be positive");
  Eigen::AlignedBox2d box;
  for (const auto& item : loops) {
    for (const auto& p : deref(item).points) box.extend(p);
  }
  if (box.isEmpty()) return RasterSet(frame_for(Eigen::AlignedBox2d(Point::Zero(), Point::Zero()), h, 1, cell_budget));
  RasterSet raster(frame_for(box, h, 1, cell_budget));
  for (const auto& item : loops) rasterize_polyline(deref(item).points, raster);
  return raster;
}

}  // namespace

GridFrame GridFrame::united(const GridFrame& other) const {
  GridFrame out;
  out.h = h;
  out.lo = lo.cwiseMin(other.lo);
  const CellIndex top = hi().cwiseMax(other.hi());
  out.width = top.x() - out.lo.x() + 1;
  out.height = top.y() - out.lo.y() + 1;
  return out;
}

GridFrame GridFrame::grown(int margin) const {
  GridFrame out = *this;
  out.lo -= CellIndex::Constant(margin);
  out.width += 2 * margin;
  out.height += 2 * margin;
  return out;
}

CellIndex cell_of(const Point& p, double h) {
  return (p.array() / h + 0.5).floor().cast<int>().matrix();
}

GridFrame frame_for(const Eigen::AlignedBox2d& box, double h, int margin, std::int64_t cell_budget) {
  if (!(h > 0.0)) throw Error(Errc::invalid_argument, "raster spacing must be positive");
  if (!box.min().allFinite() || !box.max().allFinite()) throw Error(Errc::invalid_argument, "unbounded input");
  const double ux0 = box.min().x() / h + 0.5, uy0 = box.min().y() / h + 0.5;
  const double ux1 = box.max().x() / h + 0.5, uy1 = box.max().y() / h + 0.5;
  const double cells = (ux1 - ux0 + 2.0 * margin + 3.0) * (uy1 - uy0 + 2.0 * margin + 3.0);
  if (cells > static_cast<double>(cell_budget)) {
    std::ostringstream msg;
    msg << "raster of about " << cells << " cells exceeds the budget of " << cell_budget;
    throw Error(Errc::grid_too_large, msg.str());
  }
  GridFrame frame;
  frame.h = h;
  frame.lo = CellIndex(closed_floor_lo(ux0) - margin, closed_floor_lo(uy0) - margin);
  const CellIndex top(closed_floor_hi(ux1) + margin, closed_floor_hi(uy1) + margin);
  frame.width = top.x() - frame.lo.x() + 1;
  frame.height = top.y() - frame.lo.y() + 1;
  return frame;
}

RasterSet::RasterSet(const GridFrame& frame) : frame_(frame), cells_(OccupancyGrid::Zero(frame.width, frame.height)) {}

void RasterSet::set(const CellIndex& g, bool value) {
  if (!frame_.inside(g)) throw Error(Errc::invalid_argument, "cell outside raster frame");
  cells_(g.x() - frame_.lo.x(), g.y() - frame_.lo.y()) = value ? 1 : 0;
}

std::int64_t RasterSet::count() const { return (cells_ != 0).count(); }

bool RasterSet::frame_intact() const {
  if (frame_.width < 3 || frame_.height < 3) return count() == 0;
  const auto w = frame_.width, hgt = frame_.height;
  return (cells_.col(0) == 0).all() && (cells_.col(hgt - 1) == 0).all() && (cells_.row(0) == 0).all() &&
         (cells_.row(w - 1) == 0).all();
}

std::vector<CellIndex> RasterSet::occupied() const {
  std::vector<CellIndex> out;
  for (int j = 0; j < frame_.height; ++j) {
    for (int i = 0; i < frame_.width; ++i) {
      if (cells_(i, j)) out.push_back(frame_.lo + CellIndex(i, j));
    }
  }
  return out;
}

std::vector<Point> RasterSet::centers() const {
  std::vector<Point> out;
  for (const auto& g : occupied()) out.push_back(frame_.center(g));
  return out;
}

Eigen::AlignedBox2i RasterSet::occupied_bounds() const {
  Eigen::AlignedBox2i box;
  for (int j = 0; j < frame_.height; ++j) {
    for (int i = 0; i < frame_.width; ++i) {
      if (cells_(i, j)) box.extend(frame_.lo + CellIndex(i, j));
    }
  }
  return box;
}

RasterSet RasterSet::reframed(const GridFrame& frame) const {
  RasterSet out(frame);
  const CellIndex lo = frame_.lo.cwiseMax(frame.lo);
  const CellIndex hi = frame_.hi().cwiseMin(frame.hi());
  if ((hi.array() < lo.array()).any()) return out;
  const CellIndex size = hi - lo + CellIndex::Ones();
  const CellIndex src = lo - frame_.lo;
  const CellIndex dst = lo - frame.lo;
  out.cells_.block(dst.x(), dst.y(), size.x(), size.y()) = cells_.block(src.x(), src.y(), size.x(), size.y());
  return out;
}

bool operator==(const RasterSet& a, const RasterSet& b) {
  if (a.spacing() != b.spacing()) return false;
  const GridFrame both = a.frame().united(b.frame());
  return (a.reframed(both).cells() == b.reframed(both).cells()).all();
}

void rasterize_polyline(std::span<const Point> points, RasterSet& target) {
  if (points.size() == 1) {
    supercover_segment(points[0], points[0], target);
    return;
  }
  for (std::size_t k = 0; k + 1 < points.size(); ++k) supercover_segment(points[k], points[k + 1], target);
}

RasterSet rasterize(std::span<const Loop> loops, double h, std::int64_t cell_budget) {
  return rasterize_loops(loops, [](const Loop& l) -> const Loop& { return l; }, h, cell_budget);
}

RasterSet rasterize(std::span<const Loop* const> loops, double h, std::int64_t cell_budget) {
  return rasterize_loops(loops, [](const Loop* l) -> const Loop& { return *l; }, h, cell_budget);
}

RasterSet rasterize_points(std::span<const Point> points, double h, std::int64_t cell_budget) {
  Eigen::AlignedBox2d box;
  for (const auto& p : points) box.extend(p);
  if (box.isEmpty()) box = Eigen::AlignedBox2d(Point::Zero(), Point::Zero());
  RasterSet raster(frame_for(box, h, 1, cell_budget));
  for (const auto& p : points) supercover_segment(p, p, raster);
  return raster;
}

RasterSet rasterize_domain(const Domain& domain, double h, int margin) {
  RasterSet raster(frame_for(domain.bounds(), h, margin));
  const auto& frame = raster.frame();
  for (int j = 0; j < frame.height; ++j) {
    for (int i = 0; i < frame.width; ++i) {
      const CellIndex g = frame.lo + CellIndex(i, j);
      if (domain.contains(frame.center(g))) raster.cells()(i, j) = 1;
    }
  }
  return raster;
}

RasterSet set_union(const RasterSet& a, const RasterSet& b) {
  RasterSet out = a;
  out.cells() = (a.cells() != 0 || b.reframed(a.frame()).cells() != 0).cast<std::uint8_t>();
  return out;
}

RasterSet set_difference(const RasterSet& a, const RasterSet& b) {
  RasterSet out = a;
  out.cells() = (a.cells() != 0 && b.reframed(a.frame()).cells() == 0).cast<std::uint8_t>();
  return out;
}

RasterSet set_intersection(const RasterSet& a, const RasterSet& b) {
  RasterSet out = a;
  out.cells() = (a.cells() != 0 && b.reframed(a.frame()).cells() != 0).cast<std::uint8_t>();
  return out;
}

}  // namespace lsoup
