#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

namespace lsoup {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
Scalar cross(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Twice the signed area of (a, b, c); positive for a left turn.
template <typename Scalar>
Scalar orient(const Vec2<Scalar>& a, const Vec2<Scalar>& b, const Vec2<Scalar>& c) {
  return cross<Scalar>(b - a, c - a);
}

template <typename Scalar>
int sign(Scalar v) {
  return (v > Scalar(0)) - (v < Scalar(0));
}

/// c lies in the axis box of [a, b]; only meaningful when collinear.
template <typename Scalar>
bool in_box(const Vec2<Scalar>& a, const Vec2<Scalar>& b, const Vec2<Scalar>& c) {
  return std::min(a.x(), b.x()) <= c.x() && c.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= c.y() &&
         c.y() <= std::max(a.y(), b.y());
}

/// Closed segments [a,b] and [c,d] share a point. No tolerance.
template <typename Scalar>
bool segments_intersect(const Vec2<Scalar>& a, const Vec2<Scalar>& b, const Vec2<Scalar>& c, const Vec2<Scalar>& d) {
  const int o1 = sign(orient<Scalar>(a, b, c));
  const int o2 = sign(orient<Scalar>(a, b, d));
  const int o3 = sign(orient<Scalar>(c, d, a));
  const int o4 = sign(orient<Scalar>(c, d, b));
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && in_box<Scalar>(a, b, c)) return true;
  if (o2 == 0 && in_box<Scalar>(a, b, d)) return true;
  if (o3 == 0 && in_box<Scalar>(c, d, a)) return true;
  if (o4 == 0 && in_box<Scalar>(c, d, b)) return true;
  return false;
}

/// Intersection of two closed segments as a (possibly degenerate) segment.
template <typename Scalar>
std::optional<std::pair<Vec2<Scalar>, Vec2<Scalar>>> segment_intersection(const Vec2<Scalar>& a,
                                                                          const Vec2<Scalar>& b,
                                                                          const Vec2<Scalar>& c,
                                                                          const Vec2<Scalar>& d) {
  if (!segments_intersect<Scalar>(a, b, c, d)) return std::nullopt;
  const Vec2<Scalar> r = b - a;
  const Vec2<Scalar> s = d - c;
  const Scalar denom = cross<Scalar>(r, s);
  if (denom != Scalar(0)) {
    Scalar t = cross<Scalar>(c - a, s) / denom;
    t = std::clamp(t, Scalar(0), Scalar(1));
    const Vec2<Scalar> p = a + t * r;
    return std::make_pair(p, p);
  }
  // Collinear overlap (or a degenerate segment): clip along the longer direction.
  const Vec2<Scalar> dir = r.squaredNorm() >= s.squaredNorm() ? r : s;
  const Vec2<Scalar> base = r.squaredNorm() >= s.squaredNorm() ? a : c;
  const Scalar len2 = dir.squaredNorm();
  if (len2 == Scalar(0)) return std::make_pair(a, a);
  const auto proj = [&](const Vec2<Scalar>& p) { return (p - base).dot(dir) / len2; };
  const Scalar lo = std::max(std::min(proj(a), proj(b)), std::min(proj(c), proj(d)));
  const Scalar hi = std::min(std::max(proj(a), proj(b)), std::max(proj(c), proj(d)));
  return std::make_pair(Vec2<Scalar>(base + lo * dir), Vec2<Scalar>(base + std::max(lo, hi) * dir));
}

template <typename Scalar>
Scalar point_segment_distance(const Vec2<Scalar>& p, const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  const Vec2<Scalar> ab = b - a;
  const Scalar len2 = ab.squaredNorm();
  if (len2 == Scalar(0)) return (p - a).norm();
  const Scalar t = std::clamp((p - a).dot(ab) / len2, Scalar(0), Scalar(1));
  return (p - (a + t * ab)).norm();
}

/// Euclidean distance between closed segments; zero when they meet.
template <typename Scalar>
Scalar segment_distance(const Vec2<Scalar>& a, const Vec2<Scalar>& b, const Vec2<Scalar>& c, const Vec2<Scalar>& d) {
  if (segments_intersect<Scalar>(a, b, c, d)) return Scalar(0);
  return std::min({point_segment_distance<Scalar>(a, c, d), point_segment_distance<Scalar>(b, c, d),
                   point_segment_distance<Scalar>(c, a, b), point_segment_distance<Scalar>(d, a, b)});
}

/// Parameter interval (lo, hi) of a + t (b - a), t in [0,1], inside the open
/// disk B(center; radius). Empty when lo >= hi.
template <typename Scalar>
std::pair<Scalar, Scalar> clip_to_disk(const Vec2<Scalar>& a, const Vec2<Scalar>& b, const Vec2<Scalar>& center,
                                       Scalar radius) {
  const Vec2<Scalar> d = b - a;
  const Vec2<Scalar> f = a - center;
  const Scalar qa = d.squaredNorm();
  const Scalar qb = 2 * f.dot(d);
  const Scalar qc = f.squaredNorm() - radius * radius;
  if (qa == Scalar(0)) {
    return qc < Scalar(0) ? std::make_pair(Scalar(0), Scalar(1)) : std::make_pair(Scalar(1), Scalar(0));
  }
  const Scalar disc = qb * qb - 4 * qa * qc;
  if (disc <= Scalar(0)) return {Scalar(1), Scalar(0)};
  const Scalar root = std::sqrt(disc);
  const Scalar t0 = (-qb - root) / (2 * qa);
  const Scalar t1 = (-qb + root) / (2 * qa);
  return {std::max(t0, Scalar(0)), std::min(t1, Scalar(1))};
}

}  // namespace lsoup
