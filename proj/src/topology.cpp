#include "lsoup/plane_geom.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace lsoup {
namespace {

constexpr double kFar = std::numeric_limits<double>::infinity();

// 1D lower envelope of parabolas (Felzenszwalb & Huttenlocher), skipping
// sites at +inf. Writes min_p (q - p)^2 + f[p] into out.
void distance_1d(const std::vector<double>& f, std::vector<double>& out, std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  out.assign(f.size(), kFar);
  v.resize(f.size());
  z.resize(f.size() + 1);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (!std::isfinite(f[q])) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kFar;
      z[1] = kFar;
      continue;
    }
    // z[0] = -inf keeps k >= 0
    double s;
    for (;;) {
      const int p = v[k];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s <= z[k]) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kFar;
  }
  if (k < 0) return;
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double d = q - v[j];
    out[q] = d * d + f[v[j]];
  }
}

void require_same_spacing(const RasterSet& a, const RasterSet& b) {
  const double ha = a.spacing(), hb = b.spacing();
  if (std::abs(ha - hb) > 1e-12 * std::max(ha, hb)) {
    throw Error(Errc::invalid_argument, "raster sets must share a spacing");
  }
}

}  // namespace

TopologyDecomposition decompose(const RasterSet& set) {
  if (!set.frame_intact()) throw Error(Errc::invalid_argument, "decompose needs an empty frame ring");
  const auto& frame = set.frame();
  const int w = frame.width, h = frame.height;
  const auto& occ = set.cells();

  TopologyDecomposition out{RasterSet(frame), RasterSet(frame), RasterSet(frame)};
  auto& ext = out.exterior.cells();
  std::vector<int> stack;
  const auto push = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= w || j >= h || ext(i, j) || occ(i, j)) return;
    ext(i, j) = 1;
    stack.push_back(j * w + i);
  };
  for (int i = 0; i < w; ++i) {
    push(i, 0);
    push(i, h - 1);
  }
  for (int j = 0; j < h; ++j) {
    push(0, j);
    push(w - 1, j);
  }
  while (!stack.empty()) {
    const int idx = stack.back();
    stack.pop_back();
    const int i = idx % w, j = idx / w;
    push(i + 1, j);
    push(i - 1, j);
    push(i, j + 1);
    push(i, j - 1);
  }

  out.hull.cells() = (ext == 0).cast<std::uint8_t>();
  auto& boundary = out.outer_boundary.cells();
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      if (ext(i, j)) continue;
      const bool touches = (i > 0 && ext(i - 1, j)) || (i + 1 < w && ext(i + 1, j)) || (j > 0 && ext(i, j - 1)) ||
                           (j + 1 < h && ext(i, j + 1));
      if (touches) boundary(i, j) = 1;
    }
  }
  return out;
}

Eigen::ArrayXXd squared_distance_transform(const RasterSet& features, const GridFrame& frame) {
  const RasterSet local = features.reframed(frame);
  const int w = frame.width, h = frame.height;
  Eigen::ArrayXXd dist(w, h);
  std::vector<double> f, out, z;
  std::vector<int> v;

  f.resize(static_cast<std::size_t>(w));
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) f[i] = local.cells()(i, j) ? 0.0 : kFar;
    distance_1d(f, out, v, z);
    for (int i = 0; i < w; ++i) dist(i, j) = out[i];
  }
  f.resize(static_cast<std::size_t>(h));
  for (int i = 0; i < w; ++i) {
    for (int j = 0; j < h; ++j) f[j] = dist(i, j);
    distance_1d(f, out, v, z);
    for (int j = 0; j < h; ++j) dist(i, j) = out[j];
  }
  return dist;
}

double directed_hausdorff(const RasterSet& a, const RasterSet& b) {
  require_same_spacing(a, b);
  if (a.empty() || b.empty()) throw Error(Errc::empty_input, "Hausdorff distance needs nonempty sets");
  const GridFrame frame = a.frame().united(b.frame());
  const Eigen::ArrayXXd dist = squared_distance_transform(b, frame);
  const RasterSet local = a.reframed(frame);
  const double worst = (local.cells() != 0).select(dist, 0.0).maxCoeff();
  return std::sqrt(worst) * a.spacing();
}

double hausdorff(const RasterSet& a, const RasterSet& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double directed_hausdorff(std::span<const Point> a, std::span<const Point> b) {
  if (a.empty() || b.empty()) throw Error(Errc::empty_input, "Hausdorff distance needs nonempty sets");
  double worst = 0.0;
  for (const auto& p : a) {
    double best = kFar;
    for (const auto& q : b) {
      best = std::min(best, (p - q).squaredNorm());
      if (best <= worst) break;
    }
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

double hausdorff(std::span<const Point> a, std::span<const Point> b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double hausdorff_star(const Eigen::MatrixXd& distances) {
  if (distances.rows() == 0 || distances.cols() == 0) {
    throw Error(Errc::empty_input, "induced Hausdorff distance needs nonempty collections");
  }
  return std::max(distances.rowwise().minCoeff().maxCoeff(), distances.colwise().minCoeff().maxCoeff());
}

double hausdorff_star(std::span<const RasterSet> a, std::span<const RasterSet> b) {
  Eigen::MatrixXd d(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) d(i, j) = hausdorff(a[i], b[j]);
  }
  return hausdorff_star(d);
}

RasterSet dilate(const RasterSet& set, double delta) {
  const double h = set.spacing();
  const double radius = delta + h / std::sqrt(2.0);
  const int margin = static_cast<int>(std::ceil(radius / h)) + 1;
  RasterSet out(set.frame().grown(margin));
  if (set.empty()) return out;
  const Eigen::ArrayXXd dist = squared_distance_transform(set, out.frame());
  out.cells() = (dist.sqrt() * h < radius).cast<std::uint8_t>();
  return out;
}

bool within_dilation(const RasterSet& a, const RasterSet& b, double delta) {
  if (a.empty()) return true;
  if (b.empty()) return false;
  return directed_hausdorff(a, b) < delta + a.spacing() / std::sqrt(2.0);
}

double exterior_hausdorff(const RasterSet& a, const RasterSet& b) {
  require_same_spacing(a, b);
  const GridFrame frame = a.frame().united(b.frame()).grown(1);
  const auto ta = decompose(a.reframed(frame));
  const auto tb = decompose(b.reframed(frame));
  return hausdorff(ta.exterior, tb.exterior);
}

}  // namespace lsoup
