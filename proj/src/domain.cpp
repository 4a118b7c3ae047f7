#include "lsoup/types.hpp"

#include <numbers>

namespace lsoup {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::domain_too_small: return "domain-too-small";
    case Errc::tail_mass_exceeded: return "tail-mass-exceeded";
    case Errc::grid_too_large: return "grid-too-large";
    case Errc::empty_input: return "empty-input";
    case Errc::overlap_detected: return "overlap-detected";
    case Errc::empty_truncation: return "empty-truncation";
    case Errc::not_intersecting: return "not-intersecting";
    case Errc::insufficient_replicas: return "insufficient-replicas";
    case Errc::io: return "io";
  }
  return "unknown";
}

Domain Domain::unit_square() {
  Domain d;
  d.shape_ = Shape::square;
  d.lo_ = Point::Zero();
  d.hi_ = Point::Ones();
  return d;
}

Domain Domain::unit_disk() {
  Domain d;
  d.shape_ = Shape::disk;
  d.center_ = Point::Zero();
  d.radius_ = 1.0;
  d.lo_ = Point(-1.0, -1.0);
  d.hi_ = Point(1.0, 1.0);
  return d;
}

Domain Domain::rectangle(const Point& lo, const Point& hi) {
  if (!(hi.array() > lo.array()).all()) {
    throw Error(Errc::invalid_argument, "rectangle domain needs lo < hi in both coordinates");
  }
  Domain d;
  d.shape_ = Shape::rectangle;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

Domain Domain::parse(const std::string& name) {
  if (name == "square") return unit_square();
  if (name == "disk") return unit_disk();
  throw Error(Errc::invalid_argument, "unknown domain '" + name + "' (expected square or disk)");
}

bool Domain::contains(const Point& p) const {
  if (shape_ == Shape::disk) return (p - center_).squaredNorm() < radius_ * radius_;
  return (p.array() > lo_.array()).all() && (p.array() < hi_.array()).all();
}

Eigen::AlignedBox2d Domain::bounds() const { return Eigen::AlignedBox2d(lo_, hi_); }

double Domain::area() const {
  if (shape_ == Shape::disk) return std::numbers::pi * radius_ * radius_;
  return (hi_ - lo_).prod();
}

std::string Domain::name() const {
  switch (shape_) {
    case Shape::square: return "square";
    case Shape::disk: return "disk";
    case Shape::rectangle: return "rectangle";
  }
  return "unknown";
}

}  // namespace lsoup
