#include "lsoup/lattice_soup.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace lsoup {
namespace {

constexpr std::int64_t kExactWeightLimit = 64;
constexpr std::int64_t kMaxHalfLength = std::int64_t{1} << 40;

struct BridgeSampler {
  std::int64_t plus_a, minus_a, plus_b, minus_b;

  explicit BridgeSampler(std::int64_t n) : plus_a(n), minus_a(n), plus_b(n), minus_b(n) {}

  static int draw(std::int64_t& plus, std::int64_t& minus, Rng& rng) {
    std::uniform_int_distribution<std::int64_t> pick(0, plus + minus - 1);
    if (pick(rng) < plus) {
      --plus;
      return 1;
    }
    --minus;
    return -1;
  }

  // 45 degree rotation of two independent +-1 bridges.
  Step next(Rng& rng) {
    const int a = draw(plus_a, minus_a, rng);
    const int b = draw(plus_b, minus_b, rng);
    if (a == 1 && b == 1) return Step::east;
    if (a == -1 && b == -1) return Step::west;
    if (a == 1) return Step::north;
    return Step::south;
  }
};

// Walks a uniform bridge of length 2n from root, stopping at the first vertex
// outside N*D. Returns the vertex list on success.
bool walk_inside(std::int64_t n, const LatticePoint& root, int N, const Domain& domain, Rng& rng,
                 std::vector<LatticePoint>& vertices) {
  vertices.clear();
  vertices.push_back(root);
  BridgeSampler sampler(n);
  LatticePoint pos = root;
  const double inv_n = 1.0 / N;
  for (std::int64_t k = 0; k < 2 * n; ++k) {
    pos += step_vector(sampler.next(rng));
    if (!domain.contains(pos.cast<double>() * inv_n)) return false;
    vertices.push_back(pos);
  }
  return true;
}

std::int64_t sample_half_length(const LatticeSoupPlan& plan, Rng& rng) {
  // Proposal p(n) ~ 1/(n-1/2) - 1/(n+1/2) dominates return_weight(n) * 2 pi,
  // since C(2n,n) 4^-n <= 1/sqrt(pi (n + 1/4)).
  const double a = 1.0 / (static_cast<double>(plan.n_min) - 0.5);
  const double z = a - 1.0 / (static_cast<double>(plan.n_max) + 0.5);
  for (;;) {
    const double v = a - rng.uniform() * z;
    auto n = static_cast<std::int64_t>(std::ceil(1.0 / v - 0.5));
    n = std::clamp(n, plan.n_min, plan.n_max);
    const double nd = static_cast<double>(n);
    const double accept = return_weight(n) * 2.0 * std::numbers::pi * (nd * nd - 0.25);
    if (rng.uniform() < accept) return n;
  }
}

}  // namespace

LatticePoint step_vector(Step s) {
  switch (s) {
    case Step::east: return {1, 0};
    case Step::north: return {0, 1};
    case Step::west: return {-1, 0};
    case Step::south: return {0, -1};
  }
  return {0, 0};
}

std::vector<LatticePoint> LatticeLoop::vertices() const {
  std::vector<LatticePoint> out;
  out.reserve(steps.size() + 1);
  out.push_back(root);
  for (const auto s : steps) out.push_back(out.back() + step_vector(s));
  return out;
}

bool LatticeLoop::is_closed() const {
  LatticePoint sum = LatticePoint::Zero();
  for (const auto s : steps) sum += step_vector(s);
  return sum.isZero() && !steps.empty() && steps.size() % 2 == 0;
}

double return_weight(std::int64_t n) {
  if (n < 1) throw Error(Errc::invalid_argument, "return_weight needs n >= 1");
  double central;  // C(2n,n) / 4^n
  if (n <= kExactWeightLimit) {
    central = 1.0;
    for (std::int64_t k = 1; k <= n; ++k) central *= static_cast<double>(2 * k - 1) / static_cast<double>(2 * k);
  } else {
    const double nd = static_cast<double>(n);
    central = std::exp(std::lgamma(2.0 * nd + 1.0) - 2.0 * std::lgamma(nd + 1.0) - nd * std::log(4.0));
  }
  return central * central / (2.0 * static_cast<double>(n));
}

double return_weight_tail_bound(std::int64_t n) { return 1.0 / (2.0 * std::numbers::pi * static_cast<double>(n)); }

LatticeLoop sample_bridge(std::int64_t n, Rng& rng) {
  if (n < 1) throw Error(Errc::invalid_argument, "sample_bridge needs n >= 1");
  LatticeLoop loop;
  loop.steps.reserve(static_cast<std::size_t>(2 * n));
  BridgeSampler sampler(n);
  for (std::int64_t k = 0; k < 2 * n; ++k) loop.steps.push_back(sampler.next(rng));
  return loop;
}

Loop rescale(const LatticeLoop& lattice, int N, int id) {
  Loop loop;
  loop.id = id;
  loop.kind = LoopKind::lattice;
  loop.scale = N;
  loop.root = lattice.root;
  loop.vertices = lattice.vertices();
  loop.time_length = static_cast<double>(lattice.steps.size()) / (2.0 * N * static_cast<double>(N));
  loop.points.reserve(loop.vertices.size());
  for (const auto& v : loop.vertices) loop.points.push_back(v.cast<double>() / N);
  return loop;
}

RegimeReport regime_check(const SoupConfig& cfg) {
  RegimeReport report;
  report.lambda_ok = cfg.lambda > 0.0 && cfg.lambda <= 0.5;
  if (cfg.theta) {
    report.theta_ok = *cfg.theta > 16.0 / 9.0 && *cfg.theta < 2.0;
    // Relative slack so that t0 = N^(theta-2) itself passes despite rounding.
    report.cutoff_ok = cfg.t0 >= std::pow(static_cast<double>(cfg.N), *cfg.theta - 2.0) * (1.0 - 1e-12);
  }
  report.in_regime = report.lambda_ok && report.theta_ok && report.cutoff_ok;

  std::ostringstream note;
  if (cfg.lambda > 0.5) note << "supercritical: expect unique cluster; ";
  if (cfg.lambda <= 0.0) note << "lambda <= 0: empty soup; ";
  if (!cfg.theta) {
    note << "theta unset: cutoff decoupled from N; ";
  } else {
    if (!report.theta_ok) note << "theta outside (16/9, 2); ";
    if (!report.cutoff_ok) note << "t0 < N^(theta-2); ";
  }
  report.note = report.in_regime ? "in-regime" : "out-of-regime: " + note.str();
  if (!report.in_regime && report.note.size() >= 2) report.note.resize(report.note.size() - 2);
  return report;
}

LatticeSoupPlan plan_lattice_soup(const SoupConfig& cfg) {
  if (cfg.N < 1) throw Error(Errc::invalid_argument, "N must be a positive integer");
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) throw Error(Errc::invalid_argument, "lambda must be >= 0");
  if (!(cfg.t0 >= 0.0)) throw Error(Errc::invalid_argument, "t0 must be >= 0");
  if (!(cfg.tail_tolerance > 0.0)) throw Error(Errc::invalid_argument, "tail tolerance must be positive");

  LatticeSoupPlan plan;
  plan.config = cfg;

  const auto box = cfg.domain.bounds();
  const auto lo = (box.min() * cfg.N).array().floor().cast<int>().eval();
  const auto hi = (box.max() * cfg.N).array().ceil().cast<int>().eval();
  for (int x = lo.x(); x <= hi.x(); ++x) {
    for (int y = lo.y(); y <= hi.y(); ++y) {
      if (cfg.domain.contains(Point(x, y) / cfg.N)) plan.roots.emplace_back(x, y);
    }
  }
  bool has_edge = false;
  for (const auto& r : plan.roots) {
    if (cfg.domain.contains((r + LatticePoint(1, 0)).cast<double>() / cfg.N) ||
        cfg.domain.contains((r + LatticePoint(0, 1)).cast<double>() / cfg.N)) {
      has_edge = true;
      break;
    }
  }
  if (!has_edge) throw Error(Errc::domain_too_small, "no lattice root in N*D admits a loop above the cutoff");

  const double n_cut = static_cast<double>(cfg.N) * cfg.N * cfg.t0;
  plan.n_min = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(n_cut - 1e-9 * std::max(1.0, n_cut))));

  const double root_count = static_cast<double>(plan.roots.size());
  const auto tail_for = [&](std::int64_t n_max) {
    return 2.0 * cfg.lambda * root_count * return_weight_tail_bound(n_max);
  };
  if (cfg.n_max > 0) {
    if (cfg.n_max < plan.n_min) throw Error(Errc::invalid_argument, "n_max is below the cutoff half-length");
    plan.n_max = cfg.n_max;
    if (tail_for(plan.n_max) > cfg.tail_tolerance) {
      std::ostringstream msg;
      msg << "truncation tail mass " << tail_for(plan.n_max) << " exceeds tolerance " << cfg.tail_tolerance;
      throw Error(Errc::tail_mass_exceeded, msg.str());
    }
  } else {
    const double needed = cfg.lambda * root_count / (std::numbers::pi * cfg.tail_tolerance);
    plan.n_max = std::max(plan.n_min, static_cast<std::int64_t>(std::ceil(needed)));
  }
  if (plan.n_max > kMaxHalfLength) throw Error(Errc::tail_mass_exceeded, "required truncation cap is too large");
  plan.tail_mass = tail_for(plan.n_max);

  // r(n+1) / r(n) = ((2n+1)/(2n+2))^2 * n/(n+1)
  double r = return_weight(plan.n_min);
  double sum = 0.0;
  for (std::int64_t n = plan.n_min; n <= plan.n_max; ++n) {
    sum += r;
    const double nd = static_cast<double>(n);
    const double q = (2.0 * nd + 1.0) / (2.0 * nd + 2.0);
    r *= q * q * nd / (nd + 1.0);
  }
  plan.weight_sum = sum;
  plan.expected_candidates = cfg.lambda * root_count * sum;
  return plan;
}

Soup sample_lattice_soup(const LatticeSoupPlan& plan, std::uint64_t seed) {
  const auto& cfg = plan.config;
  Soup soup;
  auto& header = soup.header;
  header.kind = LoopKind::lattice;
  header.domain = cfg.domain;
  header.lambda = cfg.lambda;
  header.N = cfg.N;
  header.t0 = cfg.t0;
  header.theta = cfg.theta;
  header.n_min = plan.n_min;
  header.n_max = plan.n_max;
  header.h = 1.0 / cfg.N;
  header.seed = seed;
  header.tail_mass = plan.tail_mass;
  header.tail_tolerance = cfg.tail_tolerance;

  if (plan.expected_candidates <= 0.0) return soup;

  // Splitting: the total count is Poisson, each candidate picks its root
  // uniformly and its half-length proportional to return_weight.
  Rng count_rng = make_rng(seed, {0});
  std::poisson_distribution<std::int64_t> count_dist(plan.expected_candidates);
  const std::int64_t candidates = count_dist(count_rng);
  header.candidates = candidates;

  std::vector<LatticePoint> vertices;
  std::uniform_int_distribution<std::size_t> pick_root(0, plan.roots.size() - 1);
  for (std::int64_t k = 0; k < candidates; ++k) {
    Rng rng = make_rng(seed, {1, static_cast<std::uint64_t>(k)});
    const LatticePoint root = plan.roots[pick_root(rng)];
    const std::int64_t n = sample_half_length(plan, rng);
    if (!walk_inside(n, root, cfg.N, cfg.domain, rng, vertices)) continue;

    Loop loop;
    loop.id = static_cast<int>(soup.loops.size());
    loop.kind = LoopKind::lattice;
    loop.scale = cfg.N;
    loop.root = root;
    loop.time_length = static_cast<double>(2 * n) / (2.0 * cfg.N * static_cast<double>(cfg.N));
    loop.points.reserve(vertices.size());
    for (const auto& v : vertices) loop.points.push_back(v.cast<double>() / cfg.N);
    loop.vertices = std::move(vertices);
    vertices = {};
    soup.loops.push_back(std::move(loop));
  }
  return soup;
}

Soup sample_lattice_soup(const SoupConfig& cfg) { return sample_lattice_soup(plan_lattice_soup(cfg), cfg.seed); }

}  // namespace lsoup
