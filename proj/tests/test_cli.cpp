#include "lsoup/cli.hpp"

#include "lsoup/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace lsoup;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "lsoup");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  std::ostringstream out, err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  Run r;
  r.code = cli::dispatch(static_cast<int>(args.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "lsoup_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("kappa subcommand") {
  const auto r = run({"kappa", "--kappa", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == "lambda = 0.25\n");
  CHECK(run({"kappa", "--lambda", "0.5"}).out == "kappa = 4\n");
  CHECK(run({"kappa", "--kappa", "5"}).code == 2);
  CHECK(run({"kappa"}).code == 2);
}

TEST_CASE("usage errors and help") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"sample", "--bogus"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  const auto dir = scratch("usage");
  const auto r = run({"converge", "--lambda", "0.5", "--n", "16,32", "--t0", "0.01", "--replicas", "2", "--seed", "1",
                      "--out", (dir / "c").string()});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error: ", 0) == 0);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  CHECK(run({"converge", "--lambda", "0.5", "--n", "16", "--t0", "0.01", "--replicas", "30", "--seed", "1", "--out",
             (dir / "c").string()})
            .code == 2);
  const auto missing = run({"clusters", "--in", (dir / "absent.jsonl").string(), "--out", (dir / "x.json").string()});
  CHECK(missing.code == 1);
  CHECK(missing.err.rfind("error: ", 0) == 0);
}

TEST_CASE("zero intensity sample is header only") {
  const auto dir = scratch("empty");
  const auto path = dir / "soup.jsonl";
  const auto r = run({"sample", "--lambda", "0", "--n", "32", "--t0", "0.01", "--seed", "1", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out == "loops = 0\n");
  const std::string text = read_text(path);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  CHECK(read_soup(path).loops.empty());
}

TEST_CASE("sample output is reproducible and round trips") {
  const auto dir = scratch("sample");
  const std::vector<std::string> base{"sample", "--lambda", "1", "--n", "32", "--t0", "0.005", "--seed", "7"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", (dir / "a.jsonl").string()});
  b.insert(b.end(), {"--out", (dir / "b.jsonl").string()});
  REQUIRE(run(a).code == 0);
  REQUIRE(run(b).code == 0);
  const std::string text = read_text(dir / "a.jsonl");
  CHECK(text == read_text(dir / "b.jsonl"));
  const Soup soup = read_soup(dir / "a.jsonl");
  CHECK(soup_to_jsonl(soup) == text);
  CHECK(soup.header.N == 32);

  const auto cont = run({"sample", "--kind", "continuum", "--lambda", "1", "--t0", "0.01", "--m", "16", "--seed", "3",
                         "--out", (dir / "c.jsonl").string()});
  REQUIRE(cont.code == 0);
  const Soup cs = read_soup(dir / "c.jsonl");
  CHECK(soup_to_jsonl(cs) == read_text(dir / "c.jsonl"));
  for (const auto& l : cs.loops) CHECK(l.points.size() == 17);
}

TEST_CASE("analysis subcommands write their outputs") {
  const auto dir = scratch("analysis");
  const auto soup = (dir / "s.jsonl").string();
  REQUIRE(run({"sample", "--lambda", "1.5", "--n", "32", "--t0", "0.004", "--seed", "11", "--out", soup}).code == 0);

  CHECK(run({"clusters", "--in", soup, "--out", (dir / "c.json").string(), "--svg", (dir / "c.svg").string()}).code == 0);
  CHECK(fs::file_size(dir / "c.json") > 0);
  CHECK(read_text(dir / "c.svg").rfind("<svg", 0) == 0);

  const auto g = run({"gap", "--in", soup, "--out", (dir / "g.json").string()});
  CHECK(g.code == 0);
  CHECK(g.out.rfind("min_gap = ", 0) == 0);

  const auto m = run({"match", "--a", soup, "--b", soup, "--eps", "0.01", "--out", (dir / "m.json").string()});
  CHECK(m.code == 0);
  CHECK(m.out.find("unmatched = 0 + 0") != std::string::npos);

  for (const std::string layer : {"loops", "hulls", "boundaries", "carpet"}) {
    const auto path = dir / (layer + ".svg");
    CHECK(run({"render", "--in", soup, "--svg", path.string(), "--layer", layer}).code == 0);
    CHECK(fs::file_size(path) > 0);
  }
}

TEST_CASE("converge writes the manifest and tables") {
  const auto dir = scratch("converge");
  const auto r = run({"converge", "--lambda", "0.5", "--n", "16,32", "--t0", "0.01", "--replicas", "30", "--seed", "5",
                      "--out", dir.string(), "--threads", "2"});
  CHECK(r.code == 0);
  for (const auto* name : {"records.csv", "convergence.csv", "manifest.json"}) CHECK(fs::exists(dir / name));
  const std::string csv = read_text(dir / "records.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 61);
}
