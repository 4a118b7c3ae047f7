#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsoup {

using Point = Eigen::Vector2d;
using LatticePoint = Eigen::Vector2i;
using PointList = std::vector<Point>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Errc {
  invalid_argument,
  domain_too_small,
  tail_mass_exceeded,
  grid_too_large,
  empty_input,
  overlap_detected,
  empty_truncation,
  not_intersecting,
  insufficient_replicas,
  io,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

enum class LoopKind { lattice, continuum };

/// A closed polyline with a time length. Samples are equally spaced in time,
/// so sample k sits at time k * time_length / (points.size() - 1).
///
/// Lattice loops additionally keep their integer vertices (unscaled) and the
/// scale N; points are then vertices / N.
struct Loop {
  int id = 0;
  LoopKind kind = LoopKind::continuum;
  double time_length = 0.0;
  PointList points;

  int scale = 0;
  LatticePoint root = LatticePoint::Zero();
  std::vector<LatticePoint> vertices;

  std::size_t segment_count() const { return points.empty() ? 0 : points.size() - 1; }
  bool is_closed() const { return points.size() >= 2 && points.front() == points.back(); }
};

class Domain {
 public:
  enum class Shape { square, disk, rectangle };

  static Domain unit_square();
  static Domain unit_disk();
  static Domain rectangle(const Point& lo, const Point& hi);
  static Domain parse(const std::string& name);

  Shape shape() const { return shape_; }
  /// Open-set membership.
  bool contains(const Point& p) const;
  Eigen::AlignedBox2d bounds() const;
  double area() const;
  std::string name() const;

  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  const Point& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Shape shape_ = Shape::square;
  Point lo_ = Point::Zero();
  Point hi_ = Point::Ones();
  Point center_ = Point::Zero();
  double radius_ = 1.0;
};

/// Everything needed to reproduce a soup, echoed into the serialized header.
struct SoupHeader {
  LoopKind kind = LoopKind::lattice;
  Domain domain = Domain::unit_square();
  double lambda = 0.0;
  int N = 0;
  double t0 = 0.0;
  double t_max = kInf;
  std::optional<double> theta;
  std::int64_t n_min = 0;
  std::int64_t n_max = 0;
  std::int64_t m = 0;
  double h = 0.0;
  std::uint64_t seed = 0;
  double tail_mass = 0.0;
  double tail_tolerance = 1e-3;
  std::int64_t candidates = 0;
};

struct Soup {
  SoupHeader header;
  std::vector<Loop> loops;
};

}  // namespace lsoup
