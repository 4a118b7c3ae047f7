#include "lsoup/io.hpp"

#include "lsoup/harness.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace lsoup {
namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormat = "lsoup-soup";

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(format_double(x)); }

double to_double(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw Error(Errc::io, "expected a number, got " + j.dump());
}

const char* kind_name(LoopKind k) { return k == LoopKind::lattice ? "lattice" : "continuum"; }

LoopKind parse_kind(const std::string& s) {
  if (s == "lattice") return LoopKind::lattice;
  if (s == "continuum") return LoopKind::continuum;
  throw Error(Errc::io, "unknown loop kind '" + s + "'");
}

Json domain_json(const Domain& d) {
  Json j;
  j["name"] = d.name();
  if (d.shape() == Domain::Shape::rectangle) {
    j["lo"] = {d.lo().x(), d.lo().y()};
    j["hi"] = {d.hi().x(), d.hi().y()};
  }
  return j;
}

Domain parse_domain(const Json& j) {
  const auto name = j.at("name").get<std::string>();
  if (name == "rectangle") {
    const auto lo = j.at("lo"), hi = j.at("hi");
    return Domain::rectangle(Point(lo[0].get<double>(), lo[1].get<double>()),
                             Point(hi[0].get<double>(), hi[1].get<double>()));
  }
  return Domain::parse(name);
}

std::string rgb_attr(const std::string& color, double opacity) {
  std::string s = "fill=\"" + color + "\"";
  if (opacity < 1.0) s += " fill-opacity=\"" + format_double(opacity) + "\"";
  return s;
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(Errc::io, "write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string soup_to_jsonl(const Soup& soup) {
  const auto& h = soup.header;
  Json head;
  head["format"] = kFormat;
  head["version"] = kVersion;
  head["kind"] = kind_name(h.kind);
  head["domain"] = domain_json(h.domain);
  head["lambda"] = h.lambda;
  head["N"] = h.N;
  head["t0"] = h.t0;
  head["t_max"] = number(h.t_max);
  head["theta"] = h.theta ? Json(*h.theta) : Json(nullptr);
  head["n_min"] = h.n_min;
  head["n_max"] = h.n_max;
  head["m"] = h.m;
  head["h"] = h.h;
  head["seed"] = h.seed;
  head["tail_mass"] = h.tail_mass;
  head["tail_tolerance"] = h.tail_tolerance;
  head["candidates"] = h.candidates;
  head["loops"] = soup.loops.size();

  std::string out = head.dump() + "\n";
  for (const auto& l : soup.loops) {
    Json j;
    j["id"] = l.id;
    j["kind"] = kind_name(l.kind);
    j["time_length"] = l.time_length;
    if (l.kind == LoopKind::lattice) {
      j["N"] = l.scale;
      j["root"] = {l.root.x(), l.root.y()};
    } else {
      j["m"] = l.segment_count();
    }
    Json v = Json::array();
    for (const auto& p : l.points) v.push_back({p.x(), p.y()});
    j["points"] = std::move(v);
    out += j.dump();
    out += '\n';
  }
  return out;
}

Soup soup_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Soup soup;
  bool have_header = false;
  std::size_t line_no = 0;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const Json j = Json::parse(line);
      if (!have_header) {
        if (j.value("format", "") != kFormat) throw Error(Errc::io, "not a soup file");
        auto& h = soup.header;
        h.kind = parse_kind(j.at("kind").get<std::string>());
        h.domain = parse_domain(j.at("domain"));
        h.lambda = to_double(j.at("lambda"));
        h.N = j.at("N").get<int>();
        h.t0 = to_double(j.at("t0"));
        h.t_max = to_double(j.at("t_max"));
        if (!j.at("theta").is_null()) h.theta = to_double(j.at("theta"));
        h.n_min = j.at("n_min").get<std::int64_t>();
        h.n_max = j.at("n_max").get<std::int64_t>();
        h.m = j.at("m").get<std::int64_t>();
        h.h = to_double(j.at("h"));
        h.seed = j.at("seed").get<std::uint64_t>();
        h.tail_mass = to_double(j.at("tail_mass"));
        h.tail_tolerance = to_double(j.at("tail_tolerance"));
        h.candidates = j.at("candidates").get<std::int64_t>();
        have_header = true;
        continue;
      }
      Loop l;
      l.id = j.at("id").get<int>();
      l.kind = parse_kind(j.at("kind").get<std::string>());
      l.time_length = to_double(j.at("time_length"));
      if (l.kind == LoopKind::lattice) {
        l.scale = j.at("N").get<int>();
        if (l.scale < 1) throw Error(Errc::io, "lattice loop needs N >= 1");
        const auto& r = j.at("root");
        l.root = LatticePoint(r[0].get<int>(), r[1].get<int>());
        // Points are exact multiples of 1/N; recover the integer vertices.
        for (const auto& p : j.at("points")) {
          const double x = p[0].get<double>() * l.scale, y = p[1].get<double>() * l.scale;
          l.vertices.emplace_back(static_cast<int>(std::lround(x)), static_cast<int>(std::lround(y)));
          l.points.push_back(l.vertices.back().cast<double>() / l.scale);
        }
      } else {
        for (const auto& p : j.at("points")) l.points.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
      soup.loops.push_back(std::move(l));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::io, "line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!have_header) throw Error(Errc::io, "soup file has no header");
  return soup;
}

void write_soup(const std::filesystem::path& path, const Soup& soup) { write_text(path, soup_to_jsonl(soup)); }

Soup read_soup(const std::filesystem::path& path) { return soup_from_jsonl(read_text(path)); }

std::string clusters_json(std::span<const Cluster> clusters, std::span<const Loop> loops, double h) {
  Json out;
  out["h"] = h;
  out["clusters"] = Json::array();
  for (const auto& c : clusters) {
    Json j;
    j["id"] = c.id;
    Json ids = Json::array();
    for (const int k : c.loops) ids.push_back(loops[static_cast<std::size_t>(k)].id);
    j["loop_ids"] = std::move(ids);
    j["diameter"] = c.diameter;
    j["hull_area_cells"] = c.hull_area_cells();
    j["outer_boundary_cells"] = c.outer_boundary_cells();
    j["outermost"] = c.outermost;
    j["parent"] = c.parent ? Json(*c.parent) : Json(nullptr);
    out["clusters"].push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

std::string match_json(const MatchReport& report) {
  Json out;
  out["threshold"] = report.threshold;
  out["perfect"] = report.perfect();
  out["max_pair_distance"] = report.max_pair_distance;
  out["pairs"] = Json::array();
  for (const auto& p : report.pairs) out["pairs"].push_back({{"a", p.a}, {"b", p.b}, {"distance", p.distance}});
  out["unmatched_a"] = report.unmatched_a;
  out["unmatched_b"] = report.unmatched_b;
  return out.dump(2) + "\n";
}

std::string gap_json(const GapResult& gap, std::span<const Loop> loops) {
  Json out;
  out["min_gap"] = number(gap.value);
  if (gap.pair) {
    out["loops"] = {loops[static_cast<std::size_t>(gap.pair->first)].id,
                    loops[static_cast<std::size_t>(gap.pair->second)].id};
  } else {
    out["loops"] = nullptr;
  }
  return out.dump(2) + "\n";
}

void write_pgm(const std::filesystem::path& path, const RasterSet& set) {
  std::string data = "P5\n" + std::to_string(set.width()) + " " + std::to_string(set.height()) + "\n255\n";
  for (int y = set.height() - 1; y >= 0; --y) {
    for (int x = 0; x < set.width(); ++x) data.push_back(set.cells()(x, y) ? '\0' : '\xff');
  }
  write_text(path, data);
}

SvgCanvas::SvgCanvas(const GridFrame& frame) : frame_(frame) {}

void SvgCanvas::add_raster(const RasterSet& set, const std::string& color, double opacity) {
  const RasterSet local = set.reframed(frame_);
  std::ostringstream out;
  out << "<g " << rgb_attr(color, opacity) << ">";
  // One rect per horizontal run of occupied cells.
  for (int y = 0; y < local.height(); ++y) {
    const int row = frame_.height - 1 - y;
    for (int x = 0; x < local.width();) {
      if (!local.cells()(x, y)) {
        ++x;
        continue;
      }
      int end = x;
      while (end < local.width() && local.cells()(end, y)) ++end;
      out << "<rect x=\"" << x << "\" y=\"" << row << "\" width=\"" << end - x << "\" height=\"1\"/>";
      x = end;
    }
  }
  out << "</g>";
  elements_.push_back(out.str());
}

void SvgCanvas::add_loops(std::span<const Loop> loops, const std::string& color, double width) {
  const Point origin = (frame_.lo.cast<double>().array() - 0.5).matrix() * frame_.h;
  std::ostringstream out;
  out << "<g fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << format_double(width) << "\">";
  for (const auto& l : loops) {
    out << "<polyline points=\"";
    for (std::size_t k = 0; k < l.points.size(); ++k) {
      const Point u = (l.points[k] - origin) / frame_.h;
      if (k) out << ' ';
      out << format_double(u.x()) << ',' << format_double(frame_.height - u.y());
    }
    out << "\"/>";
  }
  out << "</g>";
  elements_.push_back(out.str());
}

std::string SvgCanvas::str() const {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << frame_.width << ' ' << frame_.height
      << "\" width=\"" << frame_.width << "\" height=\"" << frame_.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& e : elements_) out << e << '\n';
  out << "</svg>\n";
  return out.str();
}

}  // namespace lsoup
