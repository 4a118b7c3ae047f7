#include "lsoup/brownian_soup.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace lsoup {
namespace {

void check_window(double t_min, double t_max) {
  if (!(t_min > 0.0) || !(t_max > t_min)) {
    throw Error(Errc::invalid_argument, "invalid time window: need 0 < t_min < t_max");
  }
}

// Sequential Brownian bridge from z back to z, stopping at the first sample
// outside the domain. Same finite-dimensional law as path-minus-drift.
bool bridge_inside(const Point& z, double t0, std::int64_t m, const Domain& domain, Rng& rng, PointList& out) {
  out.clear();
  out.push_back(z);
  std::normal_distribution<double> gauss;
  const double dt = t0 / static_cast<double>(m);
  Point x = z;
  for (std::int64_t k = 0; k + 1 < m; ++k) {
    const double left = static_cast<double>(m - k);
    const double sd = std::sqrt(dt * (left - 1.0) / left);
    const double gx = gauss(rng);
    const double gy = gauss(rng);
    x += (z - x) / left + sd * Point(gx, gy);
    if (!domain.contains(x)) return false;
    out.push_back(x);
  }
  out.push_back(z);
  return true;
}

}  // namespace

PointList brownian_path(const Point& z, double t0, std::int64_t m, Rng& rng) {
  if (m < 1 || !(t0 > 0.0)) throw Error(Errc::invalid_argument, "brownian_path needs m >= 1 and t0 > 0");
  std::normal_distribution<double> gauss;
  const double sd = std::sqrt(t0 / static_cast<double>(m));
  PointList path;
  path.reserve(static_cast<std::size_t>(m) + 1);
  path.push_back(z);
  for (std::int64_t k = 0; k < m; ++k) {
    const double gx = gauss(rng);
    const double gy = gauss(rng);
    path.push_back(path.back() + sd * Point(gx, gy));
  }
  return path;
}

Loop sample_bridge_curve(const Point& z, double t0, std::int64_t m, Rng& rng) {
  if (m < 8) throw Error(Errc::invalid_argument, "a continuum loop needs m >= 8 samples");
  PointList path = brownian_path(Point::Zero(), t0, m, rng);
  const Point end = path.back();
  const double md = static_cast<double>(m);
  for (std::int64_t k = 0; k <= m; ++k) {
    path[static_cast<std::size_t>(k)] += z - (static_cast<double>(k) / md) * end;
  }
  path.front() = z;
  path.back() = z;

  Loop loop;
  loop.kind = LoopKind::continuum;
  loop.time_length = t0;
  loop.points = std::move(path);
  return loop;
}

std::int64_t default_sample_count(double t0, double h) {
  const double m = std::ceil(2.0 * t0 / (h * h));
  if (!(m < 9.0e18)) return std::numeric_limits<std::int64_t>::max() / 2;
  return std::max<std::int64_t>(64, static_cast<std::int64_t>(m));
}

double expected_brownian_candidates(const BrownianSoupConfig& cfg) {
  check_window(cfg.t_min, cfg.t_max);
  const double inv_max = std::isinf(cfg.t_max) ? 0.0 : 1.0 / cfg.t_max;
  const auto box = cfg.domain.bounds();
  return cfg.lambda * box.volume() / (2.0 * std::numbers::pi) * (1.0 / cfg.t_min - inv_max);
}

double sample_time_length(double t_min, double t_max, Rng& rng) {
  check_window(t_min, t_max);
  const double inv_min = 1.0 / t_min;
  const double inv_max = std::isinf(t_max) ? 0.0 : 1.0 / t_max;
  return 1.0 / (inv_min - rng.uniform() * (inv_min - inv_max));
}

Soup sample_brownian_soup(const BrownianSoupConfig& cfg) {
  if (!(cfg.lambda >= 0.0)) throw Error(Errc::invalid_argument, "lambda must be >= 0");
  if (cfg.m != 0 && cfg.m < 8) throw Error(Errc::invalid_argument, "a continuum loop needs m >= 8 samples");
  if (cfg.m == 0 && !(cfg.h > 0.0)) throw Error(Errc::invalid_argument, "raster spacing must be positive");
  const double mean = expected_brownian_candidates(cfg);

  Soup soup;
  auto& header = soup.header;
  header.kind = LoopKind::continuum;
  header.domain = cfg.domain;
  header.lambda = cfg.lambda;
  header.t0 = cfg.t_min;
  header.t_max = cfg.t_max;
  header.m = cfg.m;
  header.h = cfg.h;
  header.seed = cfg.seed;
  if (mean <= 0.0) return soup;

  Rng count_rng = make_rng(cfg.seed, {0});
  std::poisson_distribution<std::int64_t> count_dist(mean);
  const std::int64_t candidates = count_dist(count_rng);
  header.candidates = candidates;

  const auto box = cfg.domain.bounds();
  const Point extent = box.sizes();
  PointList samples;
  for (std::int64_t k = 0; k < candidates; ++k) {
    Rng rng = make_rng(cfg.seed, {1, static_cast<std::uint64_t>(k)});
    const double ux = rng.uniform();
    const double uy = rng.uniform();
    const Point z = box.min() + Point(ux * extent.x(), uy * extent.y());
    const double t0 = sample_time_length(cfg.t_min, cfg.t_max, rng);
    if (!cfg.domain.contains(z)) continue;
    const std::int64_t m = cfg.m > 0 ? cfg.m : default_sample_count(t0, cfg.h);
    if (!bridge_inside(z, t0, m, cfg.domain, rng, samples)) continue;

    Loop loop;
    loop.id = static_cast<int>(soup.loops.size());
    loop.kind = LoopKind::continuum;
    loop.time_length = t0;
    loop.points = std::move(samples);
    samples = {};
    soup.loops.push_back(std::move(loop));
  }
  return soup;
}

}  // namespace lsoup
