#include "lsoup/coupling.hpp"

#include "lsoup/brownian_soup.hpp"
#include "lsoup/lattice_soup.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

using namespace lsoup;

namespace {

std::size_t brute_matching_size(const Eigen::MatrixXd& d, double eps) {
  std::vector<int> perm(static_cast<std::size_t>(d.cols()));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t count = 0;
    for (Eigen::Index r = 0; r < d.rows(); ++r) count += d(r, perm[static_cast<std::size_t>(r)]) <= eps;
    best = std::max(best, count);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Thin closed rectangle around the segment a-b.
Loop strand(const Point& a, const Point& b, double half_width, int samples_per_side = 10) {
  const Point dir = (b - a).normalized();
  const Point nrm(-dir.y(), dir.x());
  const Point corners[] = {a - half_width * nrm, b - half_width * nrm, b + half_width * nrm, a + half_width * nrm};
  Loop l;
  l.time_length = 1.0;
  for (int s = 0; s < 4; ++s) {
    for (int k = 0; k < samples_per_side; ++k) {
      const double f = static_cast<double>(k) / samples_per_side;
      l.points.push_back(corners[s] + f * (corners[(s + 1) % 4] - corners[s]));
    }
  }
  l.points.push_back(l.points.front());
  return l;
}

Loop figure_eight() {
  return oracle::polygon({Point(0, 0), Point(0.5, 0.5), Point(1, 0), Point(0.5, -0.5), Point(0, 0), Point(-0.5, 0.5),
                          Point(-1, 0), Point(-0.5, -0.5)});
}

}  // namespace

TEST_CASE("matching size equals exhaustive assignment") {
  auto rng = make_rng(1, {0});
  for (int trial = 0; trial < 300; ++trial) {
    const int n = trial < 200 ? 3 : 5;
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d(i, j) = rng.uniform();
    }
    const double eps = 0.1 + 0.5 * rng.uniform();
    const auto pairs = max_matching(d, eps);
    CHECK(pairs.size() == brute_matching_size(d, eps));
    std::set<int> rows, cols;
    for (const auto& [r, c] : pairs) {
      CHECK(d(r, c) <= eps);
      CHECK(rows.insert(r).second);
      CHECK(cols.insert(c).second);
    }
  }
}

TEST_CASE("matching a soup against itself and a translate") {
  BrownianSoupConfig cfg;
  cfg.lambda = 3.0;
  cfg.t_min = 0.005;
  cfg.m = 16;
  cfg.seed = 4;
  const auto loops = sample_brownian_soup(cfg).loops;
  REQUIRE(loops.size() >= 3);
  const double eps = 0.01;
  const auto same = match_loops(loops, loops, eps);
  CHECK(same.perfect());
  CHECK(same.pairs.size() == loops.size());
  CHECK(same.max_pair_distance == 0.0);
  for (const auto& p : same.pairs) CHECK(p.distance == 0.0);

  auto moved = loops;
  for (auto& l : moved) {
    for (auto& p : l.points) p += Point(3 * eps, 0);
  }
  const auto none = match_loops(loops, moved, eps);
  CHECK(none.pairs.empty());
  CHECK(none.unmatched_a.size() == loops.size());
  CHECK(none.unmatched_b.size() == loops.size());
  CHECK_THROWS_AS(match_loops(loops, loops, 0.0), Error);

  const auto loose = match_loops(loops, moved, 4 * eps);
  CHECK(loose.perfect());
  std::set<int> ids_a, ids_b;
  for (const auto& p : loose.pairs) {
    CHECK(p.distance <= loose.threshold);
    CHECK(ids_a.insert(p.a).second);
    CHECK(ids_b.insert(p.b).second);
  }
}

TEST_CASE("min_gap examples") {
  const std::vector<Loop> two{oracle::polygon({Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)}),
                              oracle::polygon({Point(2, 0), Point(3, 0), Point(3, 1), Point(2, 1)})};
  const auto g = min_gap(two);
  CHECK(g.value == 1.0);
  REQUIRE(g.pair);
  CHECK(*g.pair == std::pair{0, 1});

  const Loop a = figure_eight();
  Loop b = a;
  for (auto& p : b.points) p += Point(0.1, 0.05);
  const std::vector<Loop> meeting{a, b};
  const auto inf = min_gap(meeting);
  CHECK(inf.value == kInf);
  CHECK_FALSE(inf.pair);
  CHECK_THROWS_AS(min_gap(std::span<const Loop>(two.data(), 1)), Error);
}

TEST_CASE("min_gap agrees with brute force") {
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    std::vector<Loop> loops;
    if (seed % 2) {
      BrownianSoupConfig cfg;
      cfg.lambda = 1.5;
      cfg.t_min = 0.002;
      cfg.m = 12;
      cfg.seed = seed;
      loops = sample_brownian_soup(cfg).loops;
    } else {
      SoupConfig cfg;
      cfg.lambda = 0.8;
      cfg.N = 20;
      cfg.t0 = 0.003;
      cfg.seed = seed;
      loops = sample_lattice_soup(cfg).loops;
    }
    if (loops.size() > 50) loops.resize(50);
    if (loops.size() < 2) continue;
    const auto meet = oracle::meet_matrix(loops);
    const auto expected = oracle::min_gap(loops, meet);
    const auto got = min_gap(loops);
    CHECK(got.value == doctest::Approx(expected.value).epsilon(1e-12));
    if (std::isfinite(expected.value)) {
      REQUIRE(got.pair);
      CHECK(got.pair->first < got.pair->second);
      CHECK(oracle::curve_gap(loops[got.pair->first], loops[got.pair->second]) ==
            doctest::Approx(expected.value).epsilon(1e-12));
    }
  }
}

TEST_CASE("overlap bracket: transversal crossing") {
  const Loop h = strand(Point(-1, 0), Point(1, 0), 0.05);
  const Loop v = strand(Point(0, -1), Point(0, 1), 0.05);
  const std::vector<double> grid{0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5};
  const auto b = overlap_bracket(h, v, 32, grid, 3);
  CHECK(b.lower > 0.0);
  CHECK(b.upper >= b.lower);
  // Separation needs a shift past the crossing strand, far above the grid start.
  CHECK(b.upper > 0.01);
}

TEST_CASE("overlap bracket: tangential touch shrinks with the grid") {
  const Loop a = oracle::polygon({Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)});
  const Loop b = oracle::polygon({Point(1, 1), Point(2, 1), Point(2, 2), Point(1, 2)});
  double previous = kInf;
  for (double finest : {1e-1, 1e-2, 1e-3, 1e-4}) {
    std::vector<double> grid;
    for (double e = finest; e <= 0.5; e *= 10) grid.push_back(e);
    const auto br = overlap_bracket(a, b, 8, grid, 1);
    CHECK(br.upper <= 2 * finest + 1e-15);
    CHECK(br.upper <= previous);
    CHECK(br.lower <= br.upper);
    previous = br.upper;
  }
}

TEST_CASE("overlap bracket: identical figure eights") {
  const Loop a = figure_eight();
  const std::vector<double> grid{0.01, 0.02, 0.05};
  const auto b = overlap_bracket(a, a, 16, grid, 5);
  CHECK(b.lower > 0.0);
  CHECK(b.lower <= b.upper);
}

TEST_CASE("overlap bracket: refinement is monotone and errors") {
  auto rng = make_rng(12, {0});
  for (int trial = 0; trial < 10; ++trial) {
    const Loop a = sample_bridge_curve(Point(0, 0), 0.2, 24, rng);
    const Loop b = sample_bridge_curve(Point(0.05, 0.05), 0.2, 24, rng);
    if (!loops_intersect(a, b)) continue;
    const std::vector<double> coarse{0.004, 0.016, 0.064};
    const std::vector<double> fine{0.001, 0.002, 0.004, 0.008, 0.016, 0.032, 0.064};
    const auto bc = overlap_bracket(a, b, 16, coarse, 9);
    const auto bf = overlap_bracket(a, b, 16, fine, 9);
    CHECK(bc.lower <= bc.upper);
    CHECK(bf.lower <= bf.upper);
    CHECK(bf.upper <= bc.upper);
    CHECK(bf.lower >= bc.lower);
  }
  const Loop a = oracle::circle(Point(0, 0), 1, 12), b = oracle::circle(Point(5, 0), 1, 12);
  try {
    overlap_bracket(a, b, 4, std::vector<double>{0.1});
    FAIL("expected not_intersecting");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_intersecting);
  }
}

TEST_CASE("certified intersections survive random perturbations") {
  auto rng = make_rng(13, {0});
  const Loop h = strand(Point(-1, 0.02), Point(1, -0.03), 0.04, 6);
  const Loop v = strand(Point(0.01, -1), Point(-0.02, 1), 0.04, 6);
  for (double eps : {0.005, 0.02, 0.05}) {
    if (!certify_intersection(h, v, eps)) continue;
    for (int k = 0; k < 200; ++k) {
      Loop a = h, b = v;
      const Point shift_a = eps * 0.7 * Point(rng.uniform() - 0.5, rng.uniform() - 0.5);
      const Point shift_b = eps * 0.7 * Point(rng.uniform() - 0.5, rng.uniform() - 0.5);
      for (auto& p : a.points) p += shift_a + 0.3 * eps * Point(rng.uniform() - 0.5, rng.uniform() - 0.5);
      for (auto& p : b.points) p += shift_b + 0.3 * eps * Point(rng.uniform() - 0.5, rng.uniform() - 0.5);
      a.points.back() = a.points.front();
      b.points.back() = b.points.front();
      REQUIRE(oracle::curves_meet(a, b));
    }
  }
  CHECK(certify_intersection(h, v, 0.005));
}

TEST_CASE("self approach") {
  Loop seg;
  seg.time_length = 1.0;
  for (int k = 0; k <= 100; ++k) seg.points.emplace_back(k / 100.0, 0.0);
  CHECK(self_approach(seg, 0.1, 0.05) == 0);

  Loop eight;
  eight.time_length = 1.0;
  const Loop corners = figure_eight();
  for (std::size_t s = 0; s + 1 < corners.points.size(); ++s) {
    for (int k = 0; k < 10; ++k) {
      eight.points.push_back(corners.points[s] + (k / 10.0) * (corners.points[s + 1] - corners.points[s]));
    }
  }
  eight.points.push_back(eight.points.front());
  CHECK(self_approach(eight, 0.2, 0.01) >= 1);

  auto rng = make_rng(14, {0});
  for (int trial = 0; trial < 10; ++trial) {
    const Loop b = sample_bridge_curve(Point(0, 0), 1.0, 400, rng);
    for (double eps : {0.2, 0.1, 0.05, 0.02}) {
      CHECK(self_approach(b, 0.1, eps / 2) <= self_approach(b, 0.1, eps));
      CHECK(self_approach(b, 0.2, eps) <= self_approach(b, 0.1, eps));
    }
  }
  CHECK_THROWS_AS(self_approach(seg, 0.0, 0.1), Error);
}
