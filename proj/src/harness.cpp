#include "lsoup/harness.hpp"

#include "lsoup/clusters.hpp"
#include "lsoup/coupling.hpp"
#include "lsoup/io.hpp"
#include "lsoup/lattice_soup.hpp"
#include "lsoup/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace lsoup {
namespace {

using Json = nlohmann::ordered_json;

struct Job {
  std::size_t lambda_index;
  std::size_t n_index;
  int replica;
};

struct Outcome {
  std::optional<StatsRecord> record;
  std::string error;
};

Json domain_json(const Domain& d) {
  Json j;
  j["name"] = d.name();
  if (d.shape() == Domain::Shape::rectangle) {
    j["lo"] = {d.lo().x(), d.lo().y()};
    j["hi"] = {d.hi().x(), d.hi().y()};
  }
  return j;
}

int worker_count(const ExperimentConfig& cfg, std::size_t jobs) {
  int n = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(n, 1);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(jobs, 1)));
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.replicas < 1) throw Error(Errc::invalid_argument, "replicas must be >= 1");
  if (cfg.lambdas.empty()) throw Error(Errc::invalid_argument, "lambda list is empty");
  if (cfg.Ns.empty()) throw Error(Errc::invalid_argument, "N list is empty");
  for (const double l : cfg.lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw Error(Errc::invalid_argument, "lambda values must be finite and >= 0");
  }
  for (std::size_t k = 0; k < cfg.Ns.size(); ++k) {
    if (cfg.Ns[k] < 1) throw Error(Errc::invalid_argument, "N values must be positive");
    if (k > 0 && cfg.Ns[k] <= cfg.Ns[k - 1]) throw Error(Errc::invalid_argument, "N list must be strictly increasing");
  }
  if (!(cfg.t0 >= 0.0)) throw Error(Errc::invalid_argument, "t0 must be >= 0");
  if (!std::is_sorted(cfg.diameter_thresholds.begin(), cfg.diameter_thresholds.end())) {
    throw Error(Errc::invalid_argument, "diameter thresholds must be increasing");
  }
}

std::uint64_t replica_seed(std::uint64_t base, std::size_t lambda_index, std::size_t n_index, int replica) {
  return stream_id({base, lambda_index, n_index, static_cast<std::uint64_t>(replica)});
}

StatsRecord soup_stats(const Soup& soup, double h, const ExperimentConfig& cfg) {
  StatsRecord rec;
  rec.lambda = soup.header.lambda;
  rec.N = soup.header.N;
  rec.t0 = soup.header.t0;
  rec.loops = static_cast<std::int64_t>(soup.loops.size());

  const auto graph = build_graph(soup.loops);
  auto clusters = partition(soup.loops, graph, h);
  outermost_order(clusters);
  rec.clusters = static_cast<std::int64_t>(clusters.size());

  const RasterSet domain = rasterize_domain(soup.header.domain, h);
  const double domain_cells = static_cast<double>(domain.count());
  std::vector<Cluster> outer;
  for (auto& c : clusters) {
    if (!c.outermost) continue;
    ++rec.outermost;
    for (std::size_t k = 0; k < rec.big.size(); ++k) {
      if (c.diameter > cfg.diameter_thresholds[k]) ++rec.big[k];
    }
    rec.maxdiam = std::max(rec.maxdiam, c.diameter);
    const auto hull_in_domain = set_intersection(domain, c.topology.hull).count();
    if (domain_cells > 0) rec.hullfrac = std::max(rec.hullfrac, static_cast<double>(hull_in_domain) / domain_cells);
    outer.push_back(std::move(c));
  }
  if (domain_cells > 0) rec.carpetfrac = static_cast<double>(carpet(soup.header.domain, outer, h).count()) / domain_cells;
  if (cfg.min_gap && soup.loops.size() >= 2) rec.mingap = min_gap(soup.loops, graph).value;
  return rec;
}

EnsembleResult run_ensemble(const ExperimentConfig& cfg) {
  validate(cfg);
  EnsembleResult result;

  // Plans depend only on (lambda, N); build them once up front.
  std::vector<std::vector<LatticeSoupPlan>> plans(cfg.lambdas.size());
  for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
    for (const int N : cfg.Ns) {
      SoupConfig sc;
      sc.domain = cfg.domain;
      sc.lambda = cfg.lambdas[li];
      sc.N = N;
      sc.t0 = cfg.t0;
      sc.theta = cfg.theta;
      sc.tail_tolerance = cfg.tail_tolerance;
      plans[li].push_back(plan_lattice_soup(sc));
      const auto& p = plans[li].back();
      result.plans.push_back({sc.lambda, N, p.n_min, p.n_max, p.tail_mass, p.expected_candidates});
    }
  }

  std::vector<Job> jobs;
  for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
    for (std::size_t ni = 0; ni < cfg.Ns.size(); ++ni) {
      for (int r = 0; r < cfg.replicas; ++r) jobs.push_back({li, ni, r});
    }
  }

  std::vector<Outcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      const auto& job = jobs[k];
      const auto start = std::chrono::steady_clock::now();
      try {
        const auto& plan = plans[job.lambda_index][job.n_index];
        const Soup soup = sample_lattice_soup(plan, replica_seed(cfg.seed, job.lambda_index, job.n_index, job.replica));
        StatsRecord rec = soup_stats(soup, 1.0 / plan.config.N, cfg);
        rec.replica = job.replica;
        if (cfg.timing) {
          rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        }
        outcomes[k].record = rec;
      } catch (const std::exception& e) {
        outcomes[k].error = e.what();
      }
    }
  };
  const int workers = worker_count(cfg, jobs.size());
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  for (std::size_t k = 0; k < jobs.size(); ++k) {
    if (outcomes[k].record) {
      result.records.push_back(*outcomes[k].record);
      continue;
    }
    const auto& job = jobs[k];
    result.failures.push_back({cfg.lambdas[job.lambda_index], cfg.Ns[job.n_index], job.replica, outcomes[k].error});
    std::cerr << "replica failed: lambda=" << format_double(cfg.lambdas[job.lambda_index])
              << " N=" << cfg.Ns[job.n_index] << " replica=" << job.replica << ": " << outcomes[k].error << '\n';
  }
  if (cfg.out_dir.empty()) return result;

  std::filesystem::create_directories(cfg.out_dir);
  write_text(cfg.out_dir / "records.csv", records_csv(result.records));
  result.files.push_back("records.csv");

  std::string convergence_note;
  try {
    const auto rows = convergence_report(result.records);
    write_text(cfg.out_dir / "convergence.csv", convergence_csv(rows));
    result.files.push_back("convergence.csv");
  } catch (const Error& e) {
    if (e.code() != Errc::insufficient_replicas) throw;
    convergence_note = e.what();
  }

  Json manifest;
  manifest["version"] = kVersion;
  manifest["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION);
  Json config;
  config["domain"] = domain_json(cfg.domain);
  config["lambda"] = cfg.lambdas;
  config["N"] = cfg.Ns;
  config["t0"] = cfg.t0;
  config["theta"] = cfg.theta ? Json(*cfg.theta) : Json(nullptr);
  config["replicas"] = cfg.replicas;
  config["seed"] = cfg.seed;
  config["raster_spacing"] = "1/N";
  config["min_gap"] = cfg.min_gap;
  config["timing"] = cfg.timing;
  config["diameter_thresholds"] = cfg.diameter_thresholds;
  config["tail_tolerance"] = cfg.tail_tolerance;
  manifest["config"] = config;
  Json plans_json = Json::array();
  for (const auto& p : result.plans) {
    plans_json.push_back({{"lambda", p.lambda},
                          {"N", p.N},
                          {"n_min", p.n_min},
                          {"n_max", p.n_max},
                          {"tail_mass", p.tail_mass},
                          {"expected_candidates", p.expected_candidates}});
  }
  manifest["plans"] = plans_json;
  manifest["records"] = result.records.size();
  Json failures = Json::array();
  for (const auto& f : result.failures) {
    failures.push_back({{"lambda", f.lambda}, {"N", f.N}, {"replica", f.replica}, {"error", f.message}});
  }
  manifest["failures"] = failures;
  if (!convergence_note.empty()) manifest["convergence"] = "skipped: " + convergence_note;
  Json files = result.files;
  files.push_back("manifest.json");
  manifest["files"] = files;
  write_text(cfg.out_dir / "manifest.json", manifest.dump(2) + "\n");
  result.files.push_back("manifest.json");
  return result;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(Errc::empty_input, "KS distance needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  // Integer numerators |i nb - j na| so that equal distances compare equal.
  const auto na = static_cast<std::int64_t>(a.size()), nb = static_cast<std::int64_t>(b.size());
  std::size_t i = 0, j = 0;
  std::int64_t sup = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    sup = std::max(sup, std::abs(static_cast<std::int64_t>(i) * nb - static_cast<std::int64_t>(j) * na));
  }
  return static_cast<double>(sup) / static_cast<double>(na * nb);
}

std::vector<KsRow> convergence_report(std::span<const StatsRecord> records, int min_replicas) {
  // lambda -> N -> records
  std::map<double, std::map<int, std::vector<const StatsRecord*>>> groups;
  for (const auto& r : records) groups[r.lambda][r.N].push_back(&r);

  struct Stat {
    const char* name;
    double (*get)(const StatsRecord&);
  };
  static constexpr Stat stats[] = {
      {"maxdiam", [](const StatsRecord& r) { return r.maxdiam; }},
      {"outermost", [](const StatsRecord& r) { return static_cast<double>(r.outermost); }},
      {"carpetfrac", [](const StatsRecord& r) { return r.carpetfrac; }},
  };

  std::vector<KsRow> rows;
  for (const auto& [lambda, by_n] : groups) {
    std::vector<std::pair<int, const std::vector<const StatsRecord*>*>> usable;
    for (const auto& [N, recs] : by_n) {
      if (static_cast<int>(recs.size()) >= min_replicas) usable.emplace_back(N, &recs);
    }
    if (usable.size() < 2) continue;
    for (std::size_t k = 0; k + 1 < usable.size(); ++k) {
      const auto& ra = *usable[k].second;
      const auto& rb = *usable[k + 1].second;
      for (const auto& s : stats) {
        std::vector<double> va, vb;
        for (const auto* r : ra) va.push_back(s.get(*r));
        for (const auto* r : rb) vb.push_back(s.get(*r));
        rows.push_back({lambda, usable[k].first, usable[k + 1].first, s.name, ks_distance(va, vb), va.size(), vb.size()});
      }
    }
  }
  if (rows.empty()) {
    throw Error(Errc::insufficient_replicas, "convergence report needs two N values with at least " +
                                                 std::to_string(min_replicas) + " replicas each");
  }
  return rows;
}

std::string records_csv(std::span<const StatsRecord> records) {
  std::ostringstream out;
  out << "replica,lambda,N,t0,loops,clusters,outermost,big005,big01,big02,maxdiam,hullfrac,carpetfrac,mingap,ms\n";
  for (const auto& r : records) {
    out << r.replica << ',' << format_double(r.lambda) << ',' << r.N << ',' << format_double(r.t0) << ',' << r.loops
        << ',' << r.clusters << ',' << r.outermost << ',' << r.big[0] << ',' << r.big[1] << ',' << r.big[2] << ','
        << format_double(r.maxdiam) << ',' << format_double(r.hullfrac) << ',' << format_double(r.carpetfrac) << ','
        << format_double(r.mingap) << ',' << format_double(r.ms) << '\n';
  }
  return out.str();
}

std::string convergence_csv(std::span<const KsRow> rows) {
  std::ostringstream out;
  out << "lambda,N_a,N_b,statistic,ks,size_a,size_b\n";
  for (const auto& r : rows) {
    out << format_double(r.lambda) << ',' << r.n_a << ',' << r.n_b << ',' << r.statistic << ',' << format_double(r.ks)
        << ',' << r.size_a << ',' << r.size_b << '\n';
  }
  return out.str();
}

double kappa_to_lambda(double kappa) {
  if (!(kappa >= 8.0 / 3.0 && kappa <= 4.0)) throw Error(Errc::invalid_argument, "kappa must lie in [8/3, 4]");
  return (3.0 * kappa - 8.0) * (6.0 - kappa) / (4.0 * kappa);
}

double lambda_to_kappa(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 0.5)) throw Error(Errc::invalid_argument, "lambda must lie in [0, 1/2]");
  // 3 k^2 - (26 - 4 lambda) k + 48 = 0; smaller root, written without cancellation.
  const double b = 26.0 - 4.0 * lambda;
  return 96.0 / (b + std::sqrt(std::max(b * b - 576.0, 0.0)));
}

}  // namespace lsoup
