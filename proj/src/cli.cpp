#include "lsoup/cli.hpp"

#include "lsoup/brownian_soup.hpp"
#include "lsoup/clusters.hpp"
#include "lsoup/coupling.hpp"
#include "lsoup/harness.hpp"
#include "lsoup/io.hpp"
#include "lsoup/lattice_soup.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace lsoup::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double default_spacing(const SoupHeader& h) {
  if (h.kind == LoopKind::lattice && h.N > 0) return 1.0 / h.N;
  if (h.h > 0.0) return h.h;
  return std::min(1.0 / 256.0, h.t0 > 0.0 ? h.t0 / 8.0 : 1.0 / 256.0);
}

std::vector<Cluster> analyse(const Soup& soup, double h) {
  auto clusters = partition(soup.loops, build_graph(soup.loops), h);
  outermost_order(clusters);
  return clusters;
}

int depth_of(const std::vector<Cluster>& clusters, std::size_t k) {
  int depth = 0;
  for (auto p = clusters[k].parent; p; p = clusters[static_cast<std::size_t>(*p)].parent) ++depth;
  return depth;
}

GridFrame canvas_frame(const Soup& soup, const std::vector<Cluster>& clusters, double h) {
  GridFrame frame = rasterize_domain(soup.header.domain, h).frame();
  for (const auto& c : clusters) frame = frame.united(c.raster.frame());
  return frame;
}

std::string cluster_svg(const Soup& soup, const std::vector<Cluster>& clusters, double h) {
  static const char* shades[] = {"#bbbbbb", "#8fb3d9", "#d9b38f", "#a3d98f", "#d98fc4"};
  SvgCanvas svg(canvas_frame(soup, clusters, h));
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    svg.add_raster(clusters[k].topology.hull, shades[depth_of(clusters, k) % 5], 0.6);
  }
  for (const auto& c : clusters) svg.add_raster(c.topology.outer_boundary, "red");
  svg.add_loops(soup.loops, "black", 0.3);
  return svg.str();
}

std::string render_layer(const Soup& soup, const std::string& layer, double h) {
  if (layer == "loops") {
    SvgCanvas svg(rasterize_domain(soup.header.domain, h).frame());
    svg.add_loops(soup.loops, "black", 0.3);
    return svg.str();
  }
  const auto clusters = analyse(soup, h);
  SvgCanvas svg(canvas_frame(soup, clusters, h));
  std::vector<Cluster> outer;
  for (const auto& c : clusters) {
    if (c.outermost) outer.push_back(c);
  }
  if (layer == "hulls") {
    for (const auto& c : outer) svg.add_raster(c.topology.hull, "gray");
  } else if (layer == "boundaries") {
    for (const auto& c : outer) svg.add_raster(c.topology.outer_boundary, "red");
  } else {
    svg.add_raster(carpet(soup.header.domain, outer, h), "black");
  }
  return svg.str();
}

int cmd_sample(const std::string& domain, double lambda, std::optional<int> n, double t0, std::optional<double> theta,
               std::uint64_t seed, const std::string& out, const std::string& kind, std::int64_t m,
               std::int64_t n_max, double tail_tol) {
  Soup soup;
  if (kind == "lattice") {
    if (!n) throw UsageError("--n is required for lattice soups");
    SoupConfig cfg;
    cfg.domain = Domain::parse(domain);
    cfg.lambda = lambda;
    cfg.N = *n;
    cfg.t0 = t0;
    cfg.theta = theta;
    cfg.n_max = n_max;
    cfg.tail_tolerance = tail_tol;
    cfg.seed = seed;
    const auto regime = regime_check(cfg);
    if (theta || !regime.in_regime) std::cerr << "note: " << regime.note << '\n';
    soup = sample_lattice_soup(cfg);
  } else {
    if (!(t0 > 0.0)) throw UsageError("continuum soups need --t0 > 0");
    BrownianSoupConfig cfg;
    cfg.domain = Domain::parse(domain);
    cfg.lambda = lambda;
    cfg.t_min = t0;
    cfg.m = m;
    cfg.h = std::min(1.0 / 256.0, t0 / 8.0);
    cfg.seed = seed;
    soup = sample_brownian_soup(cfg);
    if (n) soup.header.N = *n;
    soup.header.theta = theta;
  }
  write_soup(out, soup);
  std::cout << "loops = " << soup.loops.size() << '\n';
  return 0;
}

int cmd_clusters(const std::string& in, const std::string& out, const std::string& svg, double h) {
  const Soup soup = read_soup(in);
  if (h <= 0.0) h = default_spacing(soup.header);
  const auto clusters = analyse(soup, h);
  write_text(out, clusters_json(clusters, soup.loops, h));
  if (!svg.empty()) write_text(svg, cluster_svg(soup, clusters, h));
  const auto outer = std::count_if(clusters.begin(), clusters.end(), [](const Cluster& c) { return c.outermost; });
  std::cout << "clusters = " << clusters.size() << ", outermost = " << outer << '\n';
  return 0;
}

int cmd_converge(ExperimentConfig cfg) {
  if (cfg.Ns.size() < 2) throw UsageError("converge needs at least two --n values for KS distances");
  if (cfg.replicas < 30) {
    throw UsageError("converge needs --replicas >= 30 for KS distances (got " + std::to_string(cfg.replicas) + ")");
  }
  const auto result = run_ensemble(cfg);
  std::cout << "records = " << result.records.size() << ", failures = " << result.failures.size() << '\n';
  try {
    const auto rows = convergence_report(result.records);
    std::cout << convergence_csv(rows);
  } catch (const Error& e) {
    if (e.code() != Errc::insufficient_replicas) throw;
    std::cerr << "warning: " << e.what() << '\n';
  }
  return 0;
}

int cmd_match(const std::string& a, const std::string& b, double eps, const std::string& out) {
  const Soup sa = read_soup(a), sb = read_soup(b);
  const auto report = match_loops(sa.loops, sb.loops, eps);
  write_text(out, match_json(report));
  std::cout << "pairs = " << report.pairs.size() << ", unmatched = " << report.unmatched_a.size() << " + "
            << report.unmatched_b.size() << '\n';
  return 0;
}

int cmd_gap(const std::string& in, const std::string& out) {
  const Soup soup = read_soup(in);
  GapResult gap;
  if (soup.loops.size() >= 2) gap = min_gap(soup.loops);
  write_text(out, gap_json(gap, soup.loops));
  std::cout << "min_gap = " << format_double(gap.value) << '\n';
  return 0;
}

int cmd_kappa(std::optional<double> kappa, std::optional<double> lambda, const std::string& out) {
  if (kappa.has_value() == lambda.has_value()) throw UsageError("give exactly one of --kappa and --lambda");
  const std::string line = kappa ? "lambda = " + format_double(kappa_to_lambda(*kappa))
                                 : "kappa = " + format_double(lambda_to_kappa(*lambda));
  std::cout << line << '\n';
  if (!out.empty()) write_text(out, line + "\n");
  return 0;
}

int cmd_render(const std::string& in, std::string svg, const std::string& out, const std::string& layer, double h) {
  if (svg.empty()) svg = out;
  if (svg.empty()) throw UsageError("--svg is required");
  const Soup soup = read_soup(in);
  if (h <= 0.0) h = default_spacing(soup.header);
  write_text(svg, render_layer(soup, layer, h));
  return 0;
}

}  // namespace

int dispatch(int argc, char** argv) {
  CLI::App app{"Random walk and Brownian loop soups: sampling, clusters, convergence"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::function<int()> run;
  std::uint64_t seed = 0;
  std::string out;

  // sample
  auto* sample = app.add_subcommand("sample", "Sample a loop soup and write it as JSON lines");
  std::string domain = "square", kind = "lattice";
  double lambda = 0.5, t0 = 0.01, tail_tol = 1e-3;
  std::optional<int> n;
  std::optional<double> theta;
  std::int64_t m = 0, n_max = 0;
  sample->add_option("--domain", domain, "square or disk")->check(CLI::IsMember({"square", "disk"}));
  sample->add_option("--lambda", lambda, "Intensity")->required();
  sample->add_option("--n", n, "Lattice scale N");
  sample->add_option("--t0", t0, "Scaled time-length cutoff")->required();
  sample->add_option("--theta", theta, "Regime exponent, checked against t0 >= N^(theta-2)");
  sample->add_option("--seed", seed, "Random seed")->required();
  sample->add_option("--out", out, "Output soup file")->required();
  sample->add_option("--kind", kind, "lattice or continuum")->check(CLI::IsMember({"lattice", "continuum"}));
  sample->add_option("--m", m, "Samples per continuum loop (0 derives it from the raster spacing)");
  sample->add_option("--n-max", n_max, "Half-length cap for lattice loops (0 picks it from the tail tolerance)");
  sample->add_option("--tail-tol", tail_tol, "Allowed expected number of loops lost to the half-length cap");
  sample->callback([&] {
    run = [&] { return cmd_sample(domain, lambda, n, t0, theta, seed, out, kind, m, n_max, tail_tol); };
  });

  // clusters
  auto* clusters = app.add_subcommand("clusters", "Clusters, hulls and outer boundaries of a soup");
  std::string in, svg;
  double h = 0.0;
  clusters->add_option("--in", in, "Soup file")->required();
  clusters->add_option("--out", out, "Cluster report (JSON)")->required();
  clusters->add_option("--svg", svg, "Optional SVG picture");
  clusters->add_option("--h", h, "Raster spacing (default 1/N for lattice soups)");
  clusters->add_option("--seed", seed, "Unused; accepted for uniformity");
  clusters->callback([&] { run = [&] { return cmd_clusters(in, out, svg, h); }; });

  // converge
  auto* converge = app.add_subcommand("converge", "Ensemble statistics across N and KS distances");
  ExperimentConfig ecfg;
  std::string edomain = "square";
  bool timing = false, no_gap = false;
  converge->add_option("--domain", edomain, "square or disk")->check(CLI::IsMember({"square", "disk"}));
  converge->add_option("--lambda", ecfg.lambdas, "Comma-separated intensities")->delimiter(',')->required();
  converge->add_option("--n", ecfg.Ns, "Comma-separated, strictly increasing lattice scales")
      ->delimiter(',')
      ->required();
  converge->add_option("--t0", ecfg.t0, "Scaled time-length cutoff")->required();
  converge->add_option("--theta", ecfg.theta, "Regime exponent");
  converge->add_option("--replicas", ecfg.replicas, "Replicas per (lambda, N)")->required();
  converge->add_option("--seed", ecfg.seed, "Base seed")->required();
  converge->add_option("--out", out, "Output directory")->required();
  converge->add_option("--threads", ecfg.threads, "Worker threads (0 = all cores)");
  converge->add_flag("--timing", timing, "Record wall time in the ms column");
  converge->add_flag("--no-gap", no_gap, "Skip the min_gap statistic");
  converge->callback([&] {
    run = [&] {
      ecfg.domain = Domain::parse(edomain);
      ecfg.out_dir = out;
      ecfg.timing = timing;
      ecfg.min_gap = !no_gap;
      return cmd_converge(ecfg);
    };
  });

  // match
  auto* match = app.add_subcommand("match", "Loop matching between two soups under d_inf");
  std::string path_a, path_b;
  double eps = 0.0;
  match->add_option("--a", path_a, "First soup")->required();
  match->add_option("--b", path_b, "Second soup")->required();
  match->add_option("--eps", eps, "Matching threshold")->required();
  match->add_option("--out", out, "Match report (JSON)")->required();
  match->add_option("--seed", seed, "Unused; accepted for uniformity");
  match->callback([&] { run = [&] { return cmd_match(path_a, path_b, eps, out); }; });

  // gap
  auto* gap = app.add_subcommand("gap", "Smallest distance between non-intersecting loops");
  gap->add_option("--in", in, "Soup file")->required();
  gap->add_option("--out", out, "Gap report (JSON)")->required();
  gap->add_option("--seed", seed, "Unused; accepted for uniformity");
  gap->callback([&] { run = [&] { return cmd_gap(in, out); }; });

  // kappa
  auto* kappa = app.add_subcommand("kappa", "Convert between kappa and lambda");
  std::optional<double> kappa_value, lambda_value;
  kappa->add_option("--kappa", kappa_value, "kappa in [8/3, 4]");
  kappa->add_option("--lambda", lambda_value, "lambda in [0, 1/2]");
  kappa->add_option("--out", out, "Also write the result here");
  kappa->add_option("--seed", seed, "Unused; accepted for uniformity");
  kappa->callback([&] { run = [&] { return cmd_kappa(kappa_value, lambda_value, out); }; });

  // render
  auto* render = app.add_subcommand("render", "Render one layer of a soup as SVG");
  std::string layer = "loops";
  render->add_option("--in", in, "Soup file")->required();
  render->add_option("--svg", svg, "Output SVG");
  render->add_option("--out", out, "Same as --svg");
  render->add_option("--layer", layer, "loops, hulls, boundaries or carpet")
      ->check(CLI::IsMember({"loops", "hulls", "boundaries", "carpet"}));
  render->add_option("--h", h, "Raster spacing (default 1/N for lattice soups)");
  render->add_option("--seed", seed, "Unused; accepted for uniformity");
  render->callback([&] { run = [&] { return cmd_render(in, svg, out, layer, h); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    return run ? run() : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == Errc::invalid_argument || e.code() == Errc::insufficient_replicas ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace lsoup::cli
