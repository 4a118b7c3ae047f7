#pragma once

// Brute-force reference implementations used by the tests. None of these
// call into the library's geometry code.

#include "lsoup/types.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

using lsoup::Loop;
using lsoup::Point;
using Rational = boost::multiprecision::cpp_rational;

/// All 4^(2n) step sequences, kept when closed. Steps: 0=E 1=N 2=W 3=S.
inline std::vector<std::vector<int>> closed_walks(int n) {
  std::vector<std::vector<int>> out;
  const int len = 2 * n;
  std::int64_t total = 1;
  for (int k = 0; k < len; ++k) total *= 4;
  for (std::int64_t code = 0; code < total; ++code) {
    std::vector<int> steps(static_cast<std::size_t>(len));
    std::int64_t c = code;
    int x = 0, y = 0;
    for (int k = 0; k < len; ++k) {
      steps[static_cast<std::size_t>(k)] = static_cast<int>(c % 4);
      c /= 4;
      switch (steps[static_cast<std::size_t>(k)]) {
        case 0: ++x; break;
        case 1: ++y; break;
        case 2: --x; break;
        default: --y; break;
      }
    }
    if (x == 0 && y == 0) out.push_back(std::move(steps));
  }
  return out;
}

/// Total mass of 2n-step loops at a root: (#closed walks) / (2n 4^(2n)).
inline Rational return_mass(int n) {
  const auto count = static_cast<std::int64_t>(closed_walks(n).size());
  boost::multiprecision::cpp_int denom = 2 * n;
  for (int k = 0; k < 2 * n; ++k) denom *= 4;
  return Rational(count) / Rational(denom);
}

inline int exact_orient(const Point& a, const Point& b, const Point& c) {
  const double det = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
  const double mag = std::abs((b.x() - a.x()) * (c.y() - a.y())) + std::abs((b.y() - a.y()) * (c.x() - a.x()));
  if (std::abs(det) > 1e-12 * mag) return (det > 0) - (det < 0);
  const Rational ax(a.x()), ay(a.y()), bx(b.x()), by(b.y()), cx(c.x()), cy(c.y());
  const Rational e = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  return (e > 0) - (e < 0);
}

inline bool on_segment(const Point& a, const Point& b, const Point& c) {
  return std::min(a.x(), b.x()) <= c.x() && c.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= c.y() &&
         c.y() <= std::max(a.y(), b.y());
}

inline bool segments_meet(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int d1 = exact_orient(c, d, a), d2 = exact_orient(c, d, b);
  const int d3 = exact_orient(a, b, c), d4 = exact_orient(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  return (d1 == 0 && on_segment(c, d, a)) || (d2 == 0 && on_segment(c, d, b)) || (d3 == 0 && on_segment(a, b, c)) ||
         (d4 == 0 && on_segment(a, b, d));
}

inline bool curves_meet(const Loop& a, const Loop& b) {
  for (std::size_t i = 0; i + 1 < a.points.size(); ++i) {
    for (std::size_t j = 0; j + 1 < b.points.size(); ++j) {
      if (segments_meet(a.points[i], a.points[i + 1], b.points[j], b.points[j + 1])) return true;
    }
  }
  return false;
}

inline std::vector<std::vector<char>> meet_matrix(const std::vector<Loop>& loops) {
  const std::size_t n = loops.size();
  std::vector<std::vector<char>> m(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) m[i][j] = m[j][i] = curves_meet(loops[i], loops[j]);
  }
  return m;
}

/// Clusters by breadth-first transitive closure; each sorted, ordered by
/// smallest member.
inline std::vector<std::vector<int>> clusters(const std::vector<std::vector<char>>& meet) {
  const int n = static_cast<int>(meet.size());
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    std::vector<int> comp;
    std::deque<int> queue{s};
    label[s] = static_cast<int>(out.size());
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      comp.push_back(v);
      for (int w = 0; w < n; ++w) {
        if (meet[v][w] && label[w] < 0) {
          label[w] = label[s];
          queue.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(comp);
  }
  return out;
}

inline double point_segment(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::max(0.0, std::min(1.0, t));
  return (p - (a + t * ab)).norm();
}

inline double segment_gap(const Point& a, const Point& b, const Point& c, const Point& d) {
  if (segments_meet(a, b, c, d)) return 0.0;
  return std::min({point_segment(a, c, d), point_segment(b, c, d), point_segment(c, a, b), point_segment(d, a, b)});
}

inline double curve_gap(const Loop& a, const Loop& b) {
  double best = lsoup::kInf;
  for (std::size_t i = 0; i + 1 < a.points.size(); ++i) {
    for (std::size_t j = 0; j + 1 < b.points.size(); ++j) {
      best = std::min(best, segment_gap(a.points[i], a.points[i + 1], b.points[j], b.points[j + 1]));
    }
  }
  return best;
}

struct Gap {
  double value = lsoup::kInf;
  int i = -1, j = -1;
};

inline Gap min_gap(const std::vector<Loop>& loops, const std::vector<std::vector<char>>& meet) {
  Gap g;
  for (std::size_t i = 0; i < loops.size(); ++i) {
    for (std::size_t j = i + 1; j < loops.size(); ++j) {
      if (meet[i][j]) continue;
      const double d = curve_gap(loops[i], loops[j]);
      if (d < g.value) g = {d, static_cast<int>(i), static_cast<int>(j)};
    }
  }
  return g;
}

/// Plain occupancy grid indexed [x][y].
using Grid = std::vector<std::vector<char>>;

/// Empty cells 4-connected to the grid border.
inline Grid exterior(const Grid& occ) {
  const int w = static_cast<int>(occ.size()), h = static_cast<int>(occ[0].size());
  Grid ext(static_cast<std::size_t>(w), std::vector<char>(static_cast<std::size_t>(h), 0));
  std::deque<std::pair<int, int>> queue;
  const auto push = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= w || y >= h || occ[x][y] || ext[x][y]) return;
    ext[x][y] = 1;
    queue.emplace_back(x, y);
  };
  for (int x = 0; x < w; ++x) {
    push(x, 0);
    push(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    push(0, y);
    push(w - 1, y);
  }
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    push(x + 1, y);
    push(x - 1, y);
    push(x, y + 1);
    push(x, y - 1);
  }
  return ext;
}

/// sup over a-cells of the distance to the nearest b-cell, cell units.
inline double directed(const std::vector<std::pair<int, int>>& a, const std::vector<std::pair<int, int>>& b) {
  double sup = 0.0;
  for (const auto& [ax, ay] : a) {
    double best = lsoup::kInf;
    for (const auto& [bx, by] : b) best = std::min(best, std::hypot(double(ax - bx), double(ay - by)));
    sup = std::max(sup, best);
  }
  return sup;
}

/// Asymptotic Kolmogorov p-value for a two-sample statistic.
inline double ks_pvalue(double d, std::size_t n, std::size_t m) {
  const double ne = static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m);
  const double x = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) sum += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
  return std::clamp(sum, 0.0, 1.0);
}

/// One-sample Kolmogorov p-value against a continuous CDF.
template <typename Cdf>
double ks_one_sample_pvalue(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  const double x = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) sum += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
  return std::clamp(sum, 0.0, 1.0);
}

inline double chi_square_pvalue(const std::vector<double>& observed, const std::vector<double>& expected) {
  double stat = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    stat += (observed[k] - expected[k]) * (observed[k] - expected[k]) / expected[k];
  }
  boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

/// Closed polyline through the given corners.
inline Loop polygon(std::vector<Point> corners, double time_length = 1.0, int id = 0) {
  Loop l;
  l.id = id;
  l.time_length = time_length;
  corners.push_back(corners.front());
  l.points = std::move(corners);
  return l;
}

/// Regular n-gon, closed.
inline Loop circle(const Point& c, double r, int n, double time_length = 1.0, int id = 0) {
  std::vector<Point> pts;
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * M_PI * k / n;
    pts.push_back(c + r * Point(std::cos(a), std::sin(a)));
  }
  return polygon(std::move(pts), time_length, id);
}

}  // namespace oracle
