#pragma once

#include "lsoup/types.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lsoup {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
  Domain domain = Domain::unit_square();
  std::vector<double> lambdas{0.5};
  /// Strictly increasing lattice scales.
  std::vector<int> Ns{64};
  double t0 = 0.01;
  std::optional<double> theta;
  int replicas = 1;
  std::uint64_t seed = 0;
  /// Persisted outputs go here; empty means nothing is written.
  std::filesystem::path out_dir;
  bool min_gap = true;
  /// Fill the ms column with wall time. Off by default so that output is
  /// reproducible byte for byte.
  bool timing = false;
  /// 0 uses every logical core.
  int threads = 0;
  std::array<double, 3> diameter_thresholds{0.05, 0.1, 0.2};
  double tail_tolerance = 1e-3;
};

void validate(const ExperimentConfig& cfg);

struct StatsRecord {
  int replica = 0;
  double lambda = 0.0;
  int N = 0;
  double t0 = 0.0;
  std::int64_t loops = 0;
  std::int64_t clusters = 0;
  std::int64_t outermost = 0;
  /// Outermost clusters with diameter above each threshold.
  std::array<std::int64_t, 3> big{};
  double maxdiam = 0.0;
  double hullfrac = 0.0;
  double carpetfrac = 1.0;
  double mingap = kInf;
  double ms = 0.0;
};

struct ReplicaFailure {
  double lambda = 0.0;
  int N = 0;
  int replica = 0;
  std::string message;
};

struct PlanSummary {
  double lambda = 0.0;
  int N = 0;
  std::int64_t n_min = 0;
  std::int64_t n_max = 0;
  double tail_mass = 0.0;
  double expected_candidates = 0.0;
};

struct EnsembleResult {
  /// Ordered by (lambda index, N index, replica).
  std::vector<StatsRecord> records;
  std::vector<ReplicaFailure> failures;
  std::vector<PlanSummary> plans;
  std::vector<std::string> files;
};

/// Statistics of one soup on its domain at raster spacing h.
StatsRecord soup_stats(const Soup& soup, double h, const ExperimentConfig& cfg);

/// Seed of replica r at (lambda index, N index).
std::uint64_t replica_seed(std::uint64_t base, std::size_t lambda_index, std::size_t n_index, int replica);

EnsembleResult run_ensemble(const ExperimentConfig& cfg);

struct KsRow {
  double lambda = 0.0;
  int n_a = 0;
  int n_b = 0;
  std::string statistic;
  double ks = 0.0;
  std::size_t size_a = 0;
  std::size_t size_b = 0;
};

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_distance(std::vector<double> a, std::vector<double> b);

/// KS distances between consecutive N for maxdiam, outermost and carpetfrac,
/// per lambda. Needs two N values with at least min_replicas records each.
std::vector<KsRow> convergence_report(std::span<const StatsRecord> records, int min_replicas = 30);

std::string records_csv(std::span<const StatsRecord> records);
std::string convergence_csv(std::span<const KsRow> rows);

/// Shortest round-trip decimal form; "inf" / "-inf" / "nan" otherwise.
std::string format_double(double x);

/// lambda = (3 kappa - 8)(6 - kappa) / (4 kappa) on [8/3, 4].
double kappa_to_lambda(double kappa);
/// Inverse on [0, 1/2], landing in [8/3, 4].
double lambda_to_kappa(double lambda);

}  // namespace lsoup
