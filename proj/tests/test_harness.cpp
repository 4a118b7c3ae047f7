#include "lsoup/harness.hpp"

#include "lsoup/lattice_soup.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

using namespace lsoup;

namespace {

// sup |F_a - F_b| evaluated at every sample point, right limits included.
double brute_ks(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pts = a;
  pts.insert(pts.end(), b.begin(), b.end());
  double best = 0.0;
  for (const double x : pts) {
    const auto fa = static_cast<double>(std::count_if(a.begin(), a.end(), [&](double v) { return v <= x; })) / a.size();
    const auto fb = static_cast<double>(std::count_if(b.begin(), b.end(), [&](double v) { return v <= x; })) / b.size();
    best = std::max(best, std::abs(fa - fb));
  }
  return best;
}

StatsRecord record(double lambda, int N, int replica, double maxdiam) {
  StatsRecord r;
  r.lambda = lambda;
  r.N = N;
  r.replica = replica;
  r.maxdiam = maxdiam;
  return r;
}

}  // namespace

TEST_CASE("kappa and lambda") {
  CHECK(kappa_to_lambda(4.0) == 0.5);
  CHECK(kappa_to_lambda(3.0) == 0.25);
  CHECK(kappa_to_lambda(8.0 / 3.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(lambda_to_kappa(0.5) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(lambda_to_kappa(0.25) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(lambda_to_kappa(0.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  for (int k = 0; k <= 100; ++k) {
    const double kappa = 8.0 / 3.0 + (4.0 - 8.0 / 3.0) * k / 100.0;
    CHECK(std::abs(lambda_to_kappa(kappa_to_lambda(kappa)) - kappa) < 1e-12);
    const double lambda = 0.5 * k / 100.0;
    CHECK(std::abs(kappa_to_lambda(lambda_to_kappa(lambda)) - lambda) < 1e-12);
  }
  for (const double bad : {2.0, 4.5, std::nan("")}) CHECK_THROWS_AS(kappa_to_lambda(bad), Error);
  for (const double bad : {-0.1, 0.6}) CHECK_THROWS_AS(lambda_to_kappa(bad), Error);
}

TEST_CASE("KS distance") {
  CHECK(ks_distance({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_distance({1, 2, 3}, {4, 5}) == 1.0);
  CHECK(ks_distance({1, 1, 1, 2}, {1, 2, 2, 2}) == 0.5);
  std::vector<double> lo, hi;
  for (int k = 0; k < 50; ++k) {
    lo.push_back(k);
    hi.push_back(k + 7);
  }
  CHECK(ks_distance(lo, hi) == 7.0 / 50.0);
  auto rng = make_rng(21, {0});
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a, b;
    const int na = 1 + static_cast<int>(rng.uniform() * 30), nb = 1 + static_cast<int>(rng.uniform() * 30);
    // Small integer support forces many ties.
    for (int k = 0; k < na; ++k) a.push_back(std::floor(rng.uniform() * 5));
    for (int k = 0; k < nb; ++k) b.push_back(std::floor(rng.uniform() * 5));
    CHECK(ks_distance(a, b) == doctest::Approx(brute_ks(a, b)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(ks_distance({}, {1.0}), Error);
}

TEST_CASE("convergence report") {
  std::vector<StatsRecord> recs;
  for (int r = 0; r < 30; ++r) recs.push_back(record(0.5, 16, r, 0.1 * r));
  for (int r = 0; r < 30; ++r) recs.push_back(record(0.5, 32, r, 0.1 * r));
  for (int r = 0; r < 30; ++r) recs.push_back(record(0.5, 64, r, 10.0 + r));
  const auto rows = convergence_report(recs);
  REQUIRE(rows.size() == 6);
  for (const auto& row : rows) {
    CHECK(row.size_a == 30);
    CHECK(row.size_b == 30);
    if (row.statistic == "maxdiam") CHECK(row.ks == (row.n_a == 16 ? 0.0 : 1.0));
    else CHECK(row.ks == 0.0);
  }

  std::vector<StatsRecord> few(recs.begin(), recs.begin() + 45);
  try {
    convergence_report(few);
    FAIL("expected insufficient_replicas");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::insufficient_replicas);
  }
  CHECK(convergence_report(few, 15).size() == 3);
}

TEST_CASE("empty soup statistics") {
  ExperimentConfig cfg;
  Soup soup;
  soup.header.domain = cfg.domain;
  const auto s = soup_stats(soup, 1.0 / 32, cfg);
  CHECK(s.loops == 0);
  CHECK(s.clusters == 0);
  CHECK(s.outermost == 0);
  CHECK(s.maxdiam == 0.0);
  CHECK(s.hullfrac == 0.0);
  CHECK(s.carpetfrac == 1.0);
  CHECK(s.mingap == kInf);
}

TEST_CASE("ensembles are reproducible across thread counts") {
  ExperimentConfig cfg;
  cfg.lambdas = {0.0, 0.5};
  cfg.Ns = {16, 32};
  cfg.t0 = 0.01;
  cfg.replicas = 6;
  cfg.seed = 99;
  cfg.threads = 1;
  const auto one = run_ensemble(cfg);
  cfg.threads = 3;
  const auto three = run_ensemble(cfg);
  CHECK(records_csv(one.records) == records_csv(three.records));
  REQUIRE(one.records.size() == 24);
  CHECK(one.failures.empty());

  const std::string csv = records_csv(one.records);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "replica,lambda,N,t0,loops,clusters,outermost,big005,big01,big02,maxdiam,hullfrac,carpetfrac,mingap,ms");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 25);

  for (const auto& r : one.records) {
    CHECK(r.hullfrac >= 0.0);
    CHECK(r.hullfrac <= 1.0);
    CHECK(r.carpetfrac >= 0.0);
    CHECK(r.carpetfrac <= 1.0);
    CHECK(r.ms == 0.0);
    CHECK(r.outermost <= r.clusters);
    CHECK(r.clusters <= r.loops);
    CHECK(r.big[2] <= r.big[1]);
    CHECK(r.big[1] <= r.big[0]);
    if (r.lambda == 0.0) {
      CHECK(r.loops == 0);
      CHECK(r.carpetfrac == 1.0);
    }
  }

  // Each record is the soup drawn from its replica seed.
  for (std::size_t ni = 0; ni < cfg.Ns.size(); ++ni) {
    SoupConfig sc;
    sc.lambda = 0.5;
    sc.N = cfg.Ns[ni];
    sc.t0 = cfg.t0;
    const auto plan = plan_lattice_soup(sc);
    for (int r = 0; r < cfg.replicas; ++r) {
      const auto& rec = one.records[12 + ni * 6 + static_cast<std::size_t>(r)];
      CHECK(rec.N == sc.N);
      CHECK(rec.replica == r);
      CHECK(rec.loops == static_cast<std::int64_t>(sample_lattice_soup(plan, replica_seed(99, 1, ni, r)).loops.size()));
    }
  }
}

TEST_CASE("loop counts stay below the candidate count") {
  ExperimentConfig cfg;
  cfg.lambdas = {1.0};
  cfg.Ns = {32};
  cfg.t0 = 0.01;
  cfg.replicas = 60;
  cfg.min_gap = false;
  const auto res = run_ensemble(cfg);
  REQUIRE(res.plans.size() == 1);
  const double mu = res.plans[0].expected_candidates;
  double mean = 0.0;
  for (const auto& r : res.records) mean += static_cast<double>(r.loops);
  mean /= static_cast<double>(res.records.size());
  CHECK(mean > 0.0);
  CHECK(mean < mu + 3.0 * std::sqrt(mu / res.records.size()));
}

TEST_CASE("ensemble outputs on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "lsoup_harness_test";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg;
  cfg.Ns = {16, 32};
  cfg.replicas = 3;
  cfg.out_dir = dir;
  const auto res = run_ensemble(cfg);
  CHECK(std::filesystem::exists(dir / "records.csv"));
  CHECK(std::filesystem::exists(dir / "manifest.json"));
  // Three replicas are too few for a convergence table.
  CHECK_FALSE(std::filesystem::exists(dir / "convergence.csv"));
  CHECK(std::find(res.files.begin(), res.files.end(), "records.csv") != res.files.end());
  std::filesystem::remove_all(dir);
}

TEST_CASE("configuration validation") {
  ExperimentConfig cfg;
  cfg.Ns = {64, 32};
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg.Ns = {32, 64};
  cfg.replicas = 0;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg.replicas = 1;
  cfg.lambdas = {-1.0};
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg.lambdas = {0.5};
  CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(kInf) == "inf");
  CHECK(format_double(-kInf) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
