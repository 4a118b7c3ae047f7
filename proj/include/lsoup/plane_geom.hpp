#pragma once

#include "lsoup/geometry.hpp"
#include "lsoup/raster.hpp"
#include "lsoup/types.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace lsoup {

/// Exterior, hull and outer boundary of a raster, all on its frame.
///
/// The exterior is the 4-connected component of empty cells reached from the
/// frame ring; the hull is its complement and the outer boundary is the set
/// of hull cells 4-adjacent to the exterior.
struct TopologyDecomposition {
  RasterSet exterior;
  RasterSet hull;
  RasterSet outer_boundary;
};

TopologyDecomposition decompose(const RasterSet& set);

/// Squared Euclidean distance transform (in cells^2) to the occupied cells of
/// `features`, evaluated on `frame`. Empty features give +inf everywhere.
Eigen::ArrayXXd squared_distance_transform(const RasterSet& features, const GridFrame& frame);

/// sup over cells of A of the distance to the nearest cell of B (centres).
double directed_hausdorff(const RasterSet& a, const RasterSet& b);
double hausdorff(const RasterSet& a, const RasterSet& b);

double directed_hausdorff(std::span<const Point> a, std::span<const Point> b);
double hausdorff(std::span<const Point> a, std::span<const Point> b);

/// Induced Hausdorff distance from a matrix of pairwise set distances.
double hausdorff_star(const Eigen::MatrixXd& distances);
double hausdorff_star(std::span<const RasterSet> a, std::span<const RasterSet> b);

/// Cells whose centre lies within delta + h/sqrt(2) of a cell of `set`.
RasterSet dilate(const RasterSet& set, double delta);

/// A is contained in the conservative dilation B^delta.
bool within_dilation(const RasterSet& a, const RasterSet& b, double delta);

/// d_H between exteriors of two rasters decomposed on a common frame.
double exterior_hausdorff(const RasterSet& a, const RasterSet& b);

struct CurveDistance {
  double value = 0.0;
  /// Upper bound on what piecewise-linear interpolation can hide:
  /// the sum of both curves' largest inter-sample displacements.
  double slack = 0.0;
};

/// sup_s |a(s t_a) - b(s t_b)| + |t_a - t_b| over normalized time, exact for
/// the piecewise-linear interpolants.
CurveDistance d_inf(const Loop& a, const Loop& b);

/// Position at time s in [0, t_curve] by linear interpolation.
Point curve_at(const Loop& curve, double s);

enum class Verdict { no, yes, undecided };
const char* to_string(Verdict v);

/// Whether times s and t are delta-connected: some open ball of diameter
/// delta contains a connected piece of the curve holding both points. The
/// answer comes from a grid search over ball centres with two-sided slack,
/// so it can be undecided.
Verdict delta_connected(const Loop& curve, double s, double t, double delta, int refinements = 5);

/// Whether curve points at parameters s and t (in segment units) are joined
/// inside the open disk B(center; radius). Exact for the polyline.
bool connected_in_disk(const Loop& curve, double s_param, double t_param, const Point& center, double radius);

}  // namespace lsoup
