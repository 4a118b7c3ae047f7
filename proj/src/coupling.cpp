#include "lsoup/coupling.hpp"

#include "lsoup/rng.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <unordered_map>

namespace lsoup {
namespace {

constexpr std::size_t kChunk = 16;
constexpr int kTranslationDirections = 32;
constexpr int kCertificateAngles = 16;
constexpr std::size_t kMaxCrossings = 256;

struct Chunked {
  std::vector<Eigen::AlignedBox2d> boxes;
};

Chunked chunk_boxes(const PointList& pts) {
  Chunked out;
  const std::size_t m = std::max<std::size_t>(pts.size(), 2) - 1;
  for (std::size_t start = 0; start < m; start += kChunk) {
    Eigen::AlignedBox2d box;
    const std::size_t stop = std::min(start + kChunk, m);
    for (std::size_t k = start; k <= stop && k < pts.size(); ++k) box.extend(pts[k]);
    out.boxes.push_back(box);
  }
  return out;
}

Eigen::AlignedBox2d bounds_of(const PointList& pts) {
  Eigen::AlignedBox2d box;
  for (const auto& p : pts) box.extend(p);
  return box;
}

Point segment_end(const PointList& pts, std::size_t k) { return pts[std::min(k + 1, pts.size() - 1)]; }

Loop as_polyline(const Loop& l) {
  Loop out;
  out.id = l.id;
  out.kind = LoopKind::continuum;
  out.time_length = l.time_length;
  out.points = l.points;
  return out;
}

Point uniform_in_disk(Rng& rng) {
  const double r = std::sqrt(rng.uniform());
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  return r * Point(std::cos(phi), std::sin(phi));
}

bool separable(const Loop& a, const Loop& b, double eps, int trials, std::uint64_t seed) {
  Loop pa = as_polyline(a), pb = as_polyline(b);
  for (int k = 0; k < kTranslationDirections; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / kTranslationDirections;
    const Point shift = eps * Point(std::cos(phi), std::sin(phi));
    for (std::size_t i = 0; i < a.points.size(); ++i) pa.points[i] = a.points[i] + shift;
    for (std::size_t i = 0; i < b.points.size(); ++i) pb.points[i] = b.points[i] - shift;
    if (!loops_intersect(pa, pb)) return true;
  }
  const auto eps_bits = std::bit_cast<std::uint64_t>(eps);
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = make_rng(seed, {eps_bits, static_cast<std::uint64_t>(trial)});
    const Point dir = uniform_in_disk(rng);
    const auto jitter = [&](const Loop& src, Loop& dst, double sgn) {
      for (std::size_t i = 0; i < src.points.size(); ++i) {
        dst.points[i] = src.points[i] + sgn * 0.5 * eps * dir + 0.5 * eps * uniform_in_disk(rng);
      }
      if (src.is_closed()) dst.points.back() = dst.points.front();
    };
    jitter(a, pa, 1.0);
    jitter(b, pb, -1.0);
    if (!loops_intersect(pa, pb)) return true;
  }
  return false;
}

// Walk along the curve from parameter position (segment k, point start) in
// direction dir while staying in the strip |y| <= half_height of the rotated
// frame. Returns +1 / -1 once x >= reach / x <= -reach, 0 if the strip is
// left first or the walk exhausts one traversal.
int walk_strip(const PointList& local, bool closed, std::size_t k, const Point& start, int dir, double half_height,
               double reach) {
  const std::size_t m = local.size() - 1;
  Point cur = start;
  std::size_t seg = k;
  for (std::size_t steps = 0; steps <= m; ++steps) {
    const Point next = dir > 0 ? local[seg + 1] : local[seg];
    // Clip [cur, next] to the strip; cur is inside.
    double t_exit = 1.0;
    const double dy = next.y() - cur.y();
    if (std::abs(next.y()) > half_height && dy != 0.0) {
      const double bound = next.y() > 0 ? half_height : -half_height;
      t_exit = std::clamp((bound - cur.y()) / dy, 0.0, 1.0);
    }
    const Point end = cur + t_exit * (next - cur);
    const double hi = std::max(cur.x(), end.x()), lo = std::min(cur.x(), end.x());
    if (hi >= reach) return 1;
    if (lo <= -reach) return -1;
    if (t_exit < 1.0) return 0;
    cur = next;
    if (dir > 0) {
      if (seg + 1 == m) {
        if (!closed) return 0;
        seg = 0;
      } else {
        ++seg;
      }
    } else {
      if (seg == 0) {
        if (!closed) return 0;
        seg = m - 1;
      } else {
        --seg;
      }
    }
  }
  return 0;
}

bool strand_spans(const Loop& curve, std::size_t seg, const Point& p, const Eigen::Matrix2d& rot, double half_height,
                  double reach) {
  PointList local(curve.points.size());
  for (std::size_t i = 0; i < local.size(); ++i) local[i] = rot * (curve.points[i] - p);
  const bool closed = curve.is_closed();
  const Point origin = Point::Zero();
  const int fwd = walk_strip(local, closed, seg, origin, +1, half_height, reach);
  if (fwd == 0) return false;
  const int bwd = walk_strip(local, closed, seg, origin, -1, half_height, reach);
  return bwd == -fwd;
}

struct Crossing {
  std::size_t seg_a;
  std::size_t seg_b;
  Point point;
};

std::vector<Crossing> crossings(const Loop& a, const Loop& b) {
  std::vector<Crossing> out;
  const std::size_t ma = a.segment_count(), mb = b.segment_count();
  const auto box_b = bounds_of(b.points);
  for (std::size_t i = 0; i < ma && out.size() < kMaxCrossings; ++i) {
    Eigen::AlignedBox2d sa(a.points[i], a.points[i]);
    sa.extend(a.points[i + 1]);
    if (!sa.intersects(box_b)) continue;
    for (std::size_t j = 0; j < mb && out.size() < kMaxCrossings; ++j) {
      const auto meet = segment_intersection<double>(a.points[i], a.points[i + 1], b.points[j], b.points[j + 1]);
      if (meet) out.push_back({i, j, 0.5 * (meet->first + meet->second)});
    }
  }
  return out;
}

}  // namespace

std::vector<std::pair<int, int>> max_matching(const Eigen::MatrixXd& distances, double eps) {
  const auto rows = static_cast<int>(distances.rows());
  const auto cols = static_cast<int>(distances.cols());
  std::vector<int> match_col(static_cast<std::size_t>(cols), -1);
  std::vector<char> seen;

  std::function<bool(int)> augment = [&](int r) {
    for (int c = 0; c < cols; ++c) {
      if (!(distances(r, c) <= eps) || seen[c]) continue;
      seen[c] = 1;
      if (match_col[c] < 0 || augment(match_col[c])) {
        match_col[c] = r;
        return true;
      }
    }
    return false;
  };
  for (int r = 0; r < rows; ++r) {
    seen.assign(static_cast<std::size_t>(cols), 0);
    augment(r);
  }
  std::vector<std::pair<int, int>> pairs;
  for (int c = 0; c < cols; ++c) {
    if (match_col[c] >= 0) pairs.emplace_back(match_col[c], c);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

MatchReport match_loops(std::span<const Loop> a, std::span<const Loop> b, double eps) {
  if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "matching threshold must be positive");
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(a.size()),
                                                static_cast<Eigen::Index>(b.size()), kInf);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (a[i].points.empty() || b[j].points.empty()) continue;
      // d_inf is at least the root gap plus the time-length gap.
      const double bound = (a[i].points.front() - b[j].points.front()).norm() +
                           std::abs(a[i].time_length - b[j].time_length);
      if (bound > eps) continue;
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d_inf(a[i], b[j]).value;
    }
  }

  MatchReport report;
  report.threshold = eps;
  std::vector<char> used_a(a.size(), 0), used_b(b.size(), 0);
  for (const auto& [i, j] : max_matching(d, eps)) {
    const double dist = d(i, j);
    report.pairs.push_back({a[static_cast<std::size_t>(i)].id, b[static_cast<std::size_t>(j)].id, dist});
    report.max_pair_distance = std::max(report.max_pair_distance, dist);
    used_a[static_cast<std::size_t>(i)] = 1;
    used_b[static_cast<std::size_t>(j)] = 1;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!used_a[i]) report.unmatched_a.push_back(a[i].id);
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!used_b[j]) report.unmatched_b.push_back(b[j].id);
  }
  return report;
}

double loop_distance(const Loop& a, const Loop& b, double cutoff) {
  const auto ca = chunk_boxes(a.points);
  const auto cb = chunk_boxes(b.points);
  const std::size_t ma = std::max<std::size_t>(a.points.size(), 2) - 1;
  const std::size_t mb = std::max<std::size_t>(b.points.size(), 2) - 1;
  double best = kInf;
  for (std::size_t x = 0; x < ca.boxes.size(); ++x) {
    for (std::size_t y = 0; y < cb.boxes.size(); ++y) {
      const double lb = ca.boxes[x].exteriorDistance(cb.boxes[y]);
      if (lb > std::min(best, cutoff)) continue;
      for (std::size_t i = x * kChunk; i < std::min((x + 1) * kChunk, ma); ++i) {
        for (std::size_t j = y * kChunk; j < std::min((y + 1) * kChunk, mb); ++j) {
          const double d = segment_distance<double>(a.points[i], segment_end(a.points, i), b.points[j],
                                                    segment_end(b.points, j));
          best = std::min(best, d);
        }
      }
    }
  }
  return best;
}

GapResult min_gap(std::span<const Loop> loops, const IntersectionGraph& graph) {
  if (loops.size() < 2) throw Error(Errc::invalid_argument, "min_gap needs at least two loops");
  struct Candidate {
    double bound;
    int i, j;
  };
  std::vector<Eigen::AlignedBox2d> boxes;
  for (const auto& l : loops) boxes.push_back(bounds_of(l.points));
  std::vector<Candidate> candidates;
  const int n = static_cast<int>(loops.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (graph.has_edge(i, j)) continue;
      candidates.push_back({boxes[i].exteriorDistance(boxes[j]), i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(x.bound, x.i, x.j) < std::tie(y.bound, y.i, y.j);
  });

  GapResult result;
  for (const auto& c : candidates) {
    if (c.bound > result.value) break;
    const double d = loop_distance(loops[c.i], loops[c.j], result.value);
    const auto pair = std::make_pair(c.i, c.j);
    if (d < result.value || (d == result.value && result.pair && pair < *result.pair)) {
      result.value = d;
      result.pair = pair;
    }
  }
  return result;
}

GapResult min_gap(std::span<const Loop> loops) { return min_gap(loops, build_graph(loops)); }

bool certify_intersection(const Loop& a, const Loop& b, double eps) {
  if (a.points.size() < 2 || b.points.size() < 2) return false;
  const auto box = bounds_of(a.points).merged(bounds_of(b.points));
  const double scale = box.diagonal().norm();
  if (!(scale > 0.0) || !(eps < scale)) return false;

  for (const auto& x : crossings(a, b)) {
    for (int k = 0; k < kCertificateAngles; ++k) {
      const double phi = std::numbers::pi * k / kCertificateAngles;
      const Eigen::Matrix2d rot_a = Eigen::Rotation2Dd(-phi).toRotationMatrix();
      const Eigen::Matrix2d rot_b = Eigen::Rotation2Dd(-phi - std::numbers::pi / 2).toRotationMatrix();
      // Half-widths from a fixed geometric ladder, independent of eps.
      for (double w = scale; w > eps; w *= 0.5) {
        if (!strand_spans(a, x.seg_a, x.point, rot_a, w - eps, w + eps)) continue;
        if (strand_spans(b, x.seg_b, x.point, rot_b, w - eps, w + eps)) return true;
      }
    }
  }
  return false;
}

OverlapBracket overlap_bracket(const Loop& a, const Loop& b, int trials, std::span<const double> eps_grid,
                               std::uint64_t seed) {
  if (!loops_intersect(a, b)) throw Error(Errc::not_intersecting, "overlap is defined for intersecting loops only");
  std::vector<double> grid;
  for (const double e : eps_grid) {
    if (e > 0.0 && std::isfinite(e)) grid.push_back(e);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  OverlapBracket bracket;
  for (const double e : grid) {
    if (separable(a, b, e, trials, seed)) {
      bracket.upper = 2.0 * e;
      break;
    }
  }
  for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
    if (certify_intersection(a, b, *it)) {
      bracket.lower = 2.0 * *it;
      break;
    }
  }
  return bracket;
}

std::int64_t self_approach(const Loop& curve, double tau_sep, double eps) {
  if (!(tau_sep > 0.0)) throw Error(Errc::invalid_argument, "tau_sep must be positive");
  if (curve.points.size() < 2 || !(eps >= 0.0)) return 0;
  const bool closed = curve.is_closed();
  const std::size_t m = curve.segment_count();
  const std::size_t n = closed ? m : m + 1;
  const double dt = curve.time_length / static_cast<double>(m);
  const double cell = eps > 0.0 ? eps : 1.0;

  std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets;
  const auto key = [](std::int64_t x, std::int64_t y) { return (x << 32) ^ (y & 0xffffffff); };
  std::vector<std::pair<std::int64_t, std::int64_t>> cells(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cx = static_cast<std::int64_t>(std::floor(curve.points[i].x() / cell));
    const auto cy = static_cast<std::int64_t>(std::floor(curve.points[i].y() / cell));
    cells[i] = {cx, cy};
    buckets[key(cx, cy)].push_back(i);
  }
  std::int64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = buckets.find(key(cells[i].first + dx, cells[i].second + dy));
        if (it == buckets.end()) continue;
        for (const std::size_t j : it->second) {
          if (j <= i) continue;
          std::size_t steps = j - i;
          if (closed) steps = std::min(steps, m - steps);
          if (static_cast<double>(steps) * dt < tau_sep) continue;
          if ((curve.points[i] - curve.points[j]).norm() <= eps) ++count;
        }
      }
    }
  }
  return count;
}

}  // namespace lsoup
