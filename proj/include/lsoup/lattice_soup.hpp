#pragma once

#include "lsoup/rng.hpp"
#include "lsoup/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lsoup {

enum class Step : std::uint8_t { east, north, west, south };

LatticePoint step_vector(Step s);

/// A rooted nearest-neighbour loop on Z^2 with 2n steps.
struct LatticeLoop {
  LatticePoint root = LatticePoint::Zero();
  std::vector<Step> steps;

  std::int64_t half_length() const { return static_cast<std::int64_t>(steps.size() / 2); }
  /// root, root + s_0, ..., back to root (steps.size() + 1 entries).
  std::vector<LatticePoint> vertices() const;
  bool is_closed() const;
};

/// Total random-walk loop mass of 2n-step loops at a fixed root:
/// C(2n,n)^2 4^{-2n} / (2n). Large n goes through log-gamma.
double return_weight(std::int64_t n);

/// Upper bound on sum_{k > n} return_weight(k), i.e. 1 / (2 pi n).
double return_weight_tail_bound(std::int64_t n);

/// Uniform sample among the C(2n,n)^2 closed 2n-step loops at the origin.
LatticeLoop sample_bridge(std::int64_t n, Rng& rng);

/// Brownian rescaling: vertices / N, time length = steps / (2 N^2).
Loop rescale(const LatticeLoop& loop, int N, int id = 0);

struct SoupConfig {
  Domain domain = Domain::unit_square();
  double lambda = 0.5;
  int N = 64;
  /// Scaled time cutoff: a loop is kept iff steps >= 2 N^2 t0.
  double t0 = 0.01;
  std::optional<double> theta;
  /// Cap on the half-length; 0 picks the smallest cap meeting tail_tolerance.
  std::int64_t n_max = 0;
  double tail_tolerance = 1e-3;
  std::uint64_t seed = 0;
};

struct RegimeReport {
  bool lambda_ok = false;
  bool theta_ok = false;
  bool cutoff_ok = false;
  bool in_regime = false;
  std::string note;
};

RegimeReport regime_check(const SoupConfig& cfg);

/// Precomputed, seed-independent part of a lattice soup draw.
struct LatticeSoupPlan {
  SoupConfig config;
  std::vector<LatticePoint> roots;
  std::int64_t n_min = 1;
  std::int64_t n_max = 1;
  /// sum_{n = n_min}^{n_max} return_weight(n)
  double weight_sum = 0.0;
  /// Bound on expected loops beyond n_max.
  double tail_mass = 0.0;
  /// lambda * |roots| * weight_sum
  double expected_candidates = 0.0;
};

LatticeSoupPlan plan_lattice_soup(const SoupConfig& cfg);

/// One draw of the rescaled soup restricted to loops that stay in N*D with
/// at least 2 N^2 t0 steps. Pure function of (plan.config, seed).
Soup sample_lattice_soup(const LatticeSoupPlan& plan, std::uint64_t seed);
Soup sample_lattice_soup(const SoupConfig& cfg);

}  // namespace lsoup
