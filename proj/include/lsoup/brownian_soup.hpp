#pragma once

#include "lsoup/rng.hpp"
#include "lsoup/types.hpp"

#include <cstdint>

namespace lsoup {

/// Planar Brownian motion sampled at m steps of variance t0/m per coordinate,
/// started at z. Returns m + 1 points.
PointList brownian_path(const Point& z, double t0, std::int64_t m, Rng& rng);

/// Brownian loop of time length t0 rooted at z: z + B_t - (t/t0) B_t0, sampled
/// at m + 1 equally spaced times. Needs m >= 8.
Loop sample_bridge_curve(const Point& z, double t0, std::int64_t m, Rng& rng);

/// Sample count so that the inter-sample displacement has standard deviation
/// at most h: max(64, ceil(2 t0 / h^2)).
std::int64_t default_sample_count(double t0, double h);

struct BrownianSoupConfig {
  Domain domain = Domain::unit_square();
  double lambda = 0.5;
  double t_min = 0.01;
  double t_max = kInf;
  /// Samples per loop; 0 derives it per loop from h.
  std::int64_t m = 0;
  double h = 1.0 / 256.0;
  std::uint64_t seed = 0;
};

/// lambda * A(R) * (1/2pi) * (1/t_min - 1/t_max), R the bounding box of D.
double expected_brownian_candidates(const BrownianSoupConfig& cfg);

/// Inverse-CDF draw from the density proportional to t^-2 on [t_min, t_max].
double sample_time_length(double t_min, double t_max, Rng& rng);

/// Discretized Brownian loop soup in D. Candidates whose sampled polyline
/// leaves D are rejected. Pure function of (cfg, cfg.seed).
Soup sample_brownian_soup(const BrownianSoupConfig& cfg);

}  // namespace lsoup
