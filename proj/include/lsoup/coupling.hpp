#pragma once

#include "lsoup/clusters.hpp"
#include "lsoup/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace lsoup {

struct MatchPair {
  int a = 0;
  int b = 0;
  double distance = 0.0;
};

/// Loop correspondence between two soups; ids are Loop::id values.
struct MatchReport {
  std::vector<MatchPair> pairs;
  std::vector<int> unmatched_a;
  std::vector<int> unmatched_b;
  double max_pair_distance = 0.0;
  double threshold = 0.0;

  bool perfect() const { return unmatched_a.empty() && unmatched_b.empty(); }
};

/// Maximum-cardinality matching on the bipartite graph {(i, j) : d(i, j) <= eps}
/// (augmenting paths). Returns (row, column) index pairs in row order.
std::vector<std::pair<int, int>> max_matching(const Eigen::MatrixXd& distances, double eps);

MatchReport match_loops(std::span<const Loop> a, std::span<const Loop> b, double eps);

struct GapResult {
  double value = kInf;
  /// Loop indices (first < second) attaining the gap; empty if every pair meets.
  std::optional<std::pair<int, int>> pair;
};

/// Euclidean distance between two polylines (zero when they meet). Segment
/// pairs whose boxes are farther than `cutoff` are skipped.
double loop_distance(const Loop& a, const Loop& b, double cutoff = kInf);

/// Smallest distance between non-intersecting loops; ties go to the
/// lexicographically smallest index pair.
GapResult min_gap(std::span<const Loop> loops, const IntersectionGraph& graph);
GapResult min_gap(std::span<const Loop> loops);

struct OverlapBracket {
  double lower = 0.0;
  double upper = kInf;
};

/// Brackets twice the largest eps at which every eps-perturbation pair still
/// intersects. Both ends are heuristic: the upper end comes from a finite
/// search over translations and random jitters, the lower end from a
/// crossing certificate (two strands spanning a box around a crossing).
OverlapBracket overlap_bracket(const Loop& a, const Loop& b, int trials, std::span<const double> eps_grid,
                               std::uint64_t seed = 0);

/// Whether every pair of curves within eps (sup norm) of a and b must meet,
/// by the strand-crossing certificate.
bool certify_intersection(const Loop& a, const Loop& b, double eps);

/// Sample pairs at (cyclic, for loops) time separation >= tau_sep that lie
/// within eps of each other.
std::int64_t self_approach(const Loop& curve, double tau_sep, double eps);

}  // namespace lsoup
