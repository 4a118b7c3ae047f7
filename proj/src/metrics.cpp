#include "lsoup/plane_geom.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace lsoup {
namespace {

double max_step(const PointList& pts) {
  double best = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) best = std::max(best, (pts[k + 1] - pts[k]).norm());
  return best;
}

// Point at normalized time num/den on a curve with m segments, exact index.
Point at_fraction(const PointList& pts, std::int64_t num, std::int64_t den) {
  const auto m = static_cast<std::int64_t>(pts.size()) - 1;
  const std::int64_t scaled = num * m;
  const std::int64_t k = std::min(scaled / den, m - 1);
  const double frac = static_cast<double>(scaled - k * den) / static_cast<double>(den);
  const auto& a = pts[static_cast<std::size_t>(k)];
  const auto& b = pts[static_cast<std::size_t>(k + 1)];
  return a + frac * (b - a);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::no: return "no";
    case Verdict::yes: return "yes";
    case Verdict::undecided: return "undecided";
  }
  return "unknown";
}

CurveDistance d_inf(const Loop& a, const Loop& b) {
  if (a.points.size() < 2 || b.points.size() < 2) throw Error(Errc::invalid_argument, "d_inf needs two samples per curve");
  const auto ma = static_cast<std::int64_t>(a.points.size()) - 1;
  const auto mb = static_cast<std::int64_t>(b.points.size()) - 1;

  // Breakpoints i/ma and j/mb merged in exact rational order.
  double sup = 0.0;
  std::int64_t i = 0, j = 0;
  while (i <= ma || j <= mb) {
    Point pa, pb;
    if (j > mb || (i <= ma && i * mb <= j * ma)) {
      pa = a.points[static_cast<std::size_t>(i)];
      pb = at_fraction(b.points, i, ma);
      if (i * mb == j * ma) ++j;
      ++i;
    } else {
      pa = at_fraction(a.points, j, mb);
      pb = b.points[static_cast<std::size_t>(j)];
      ++j;
    }
    sup = std::max(sup, (pa - pb).norm());
  }
  return {sup + std::abs(a.time_length - b.time_length), max_step(a.points) + max_step(b.points)};
}

Point curve_at(const Loop& curve, double s) {
  if (curve.points.empty()) throw Error(Errc::empty_input, "empty curve");
  if (curve.points.size() == 1 || !(curve.time_length > 0.0)) return curve.points.front();
  const double m = static_cast<double>(curve.segment_count());
  const double u = std::clamp(s / curve.time_length, 0.0, 1.0) * m;
  const auto k = std::min(static_cast<std::size_t>(u), curve.segment_count() - 1);
  const double frac = u - static_cast<double>(k);
  return curve.points[k] + frac * (curve.points[k + 1] - curve.points[k]);
}

bool connected_in_disk(const Loop& curve, double s_param, double t_param, const Point& center, double radius) {
  const auto& pts = curve.points;
  const std::size_t m = curve.segment_count();
  if (m == 0) return (pts.front() - center).norm() < radius;

  const auto segment_of = [&](double u) { return std::min(static_cast<std::size_t>(std::max(u, 0.0)), m - 1); };
  const auto point_at = [&](double u) {
    const auto k = segment_of(u);
    return Point(pts[k] + (u - static_cast<double>(k)) * (pts[k + 1] - pts[k]));
  };
  const double r2 = radius * radius;
  if ((point_at(s_param) - center).squaredNorm() >= r2 || (point_at(t_param) - center).squaredNorm() >= r2) {
    return false;
  }

  // Open pieces of each segment inside the disk.
  std::vector<std::size_t> live;
  std::vector<char> has_piece(m, 0);
  for (std::size_t k = 0; k < m; ++k) {
    const auto [lo, hi] = clip_to_disk<double>(pts[k], pts[k + 1], center, radius);
    if (lo < hi || (lo == hi && (pts[k] - center).squaredNorm() < r2)) {
      has_piece[k] = 1;
      live.push_back(k);
    }
  }
  UnionFind uf(m);
  const bool closed = curve.is_closed();
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t next = k + 1 < m ? k + 1 : 0;
    if (next == 0 && !closed) break;
    if (!has_piece[k] || !has_piece[next]) continue;
    if ((pts[k + 1] - center).squaredNorm() < r2) uf.unite(static_cast<int>(k), static_cast<int>(next));
  }
  for (std::size_t x = 0; x < live.size(); ++x) {
    for (std::size_t y = x + 1; y < live.size(); ++y) {
      const std::size_t k = live[x], l = live[y];
      if (uf.find(static_cast<int>(k)) == uf.find(static_cast<int>(l))) continue;
      const auto meet = segment_intersection<double>(pts[k], pts[k + 1], pts[l], pts[l + 1]);
      if (!meet) continue;
      const auto [lo, hi] = clip_to_disk<double>(meet->first, meet->second, center, radius);
      const bool inside = lo < hi || (meet->first - center).squaredNorm() < r2;
      if (inside) uf.unite(static_cast<int>(k), static_cast<int>(l));
    }
  }
  return uf.find(static_cast<int>(segment_of(s_param))) == uf.find(static_cast<int>(segment_of(t_param)));
}

Verdict delta_connected(const Loop& curve, double s, double t, double delta, int refinements) {
  if (!(delta > 0.0)) throw Error(Errc::invalid_argument, "delta must be positive");
  const double T = curve.time_length;
  if (s < 0.0 || t < 0.0 || s > T || t > T) throw Error(Errc::invalid_argument, "times must lie in [0, t_curve]");
  if (s == t) return Verdict::yes;

  const Point p = curve_at(curve, s);
  const Point q = curve_at(curve, t);
  const double r = delta / 2.0;
  const double gap = (p - q).norm();
  if (gap >= delta) return Verdict::no;

  const double m = static_cast<double>(curve.segment_count());
  const double su = T > 0.0 ? s / T * m : 0.0;
  const double tu = T > 0.0 ? t / T * m : 0.0;

  // Feasible centres lie in the lens |c - p| < r, |c - q| < r.
  Eigen::AlignedBox2d lens(p, p);
  lens.extend(q);
  lens.min().array() -= r;
  lens.max().array() += r;
  lens = lens.intersection(Eigen::AlignedBox2d((p.array() - r).matrix(), (p.array() + r).matrix()));
  lens = lens.intersection(Eigen::AlignedBox2d((q.array() - r).matrix(), (q.array() + r).matrix()));

  const Point extent = lens.sizes();
  int cells = 4;
  for (int level = 0; level <= refinements; ++level, cells *= 2) {
    const double g = std::max(extent.x(), extent.y()) / cells;
    if (!(g > 0.0)) break;
    const double grow = g * std::sqrt(0.5);
    bool possible = false;
    for (int ix = 0; ix < cells; ++ix) {
      for (int iy = 0; iy < cells; ++iy) {
        const Point c = lens.min() + Point((ix + 0.5) * g, (iy + 0.5) * g);
        if ((c - p).norm() >= r + grow || (c - q).norm() >= r + grow) continue;
        const double shrunk = r * (1.0 - 1e-12);
        if ((c - p).norm() < shrunk && (c - q).norm() < shrunk && connected_in_disk(curve, su, tu, c, shrunk)) {
          return Verdict::yes;
        }
        if (!possible && connected_in_disk(curve, su, tu, c, r + grow)) possible = true;
      }
    }
    if (!possible) return Verdict::no;
  }
  return Verdict::undecided;
}

}  // namespace lsoup
