#pragma once

#include "lsoup/clusters.hpp"
#include "lsoup/coupling.hpp"
#include "lsoup/raster.hpp"
#include "lsoup/types.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace lsoup {

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// JSON lines: one header object, then one object per loop with its points
/// in domain coordinates.
std::string soup_to_jsonl(const Soup& soup);
Soup soup_from_jsonl(const std::string& text);

void write_soup(const std::filesystem::path& path, const Soup& soup);
Soup read_soup(const std::filesystem::path& path);

std::string clusters_json(std::span<const Cluster> clusters, std::span<const Loop> loops, double h);
std::string match_json(const MatchReport& report);
std::string gap_json(const GapResult& gap, std::span<const Loop> loops);

/// Binary greymap, occupied cells black, top row = largest y.
void write_pgm(const std::filesystem::path& path, const RasterSet& set);

/// SVG in cell units of a fixed frame (one cell = one user unit, y up).
class SvgCanvas {
 public:
  explicit SvgCanvas(const GridFrame& frame);

  void add_raster(const RasterSet& set, const std::string& color, double opacity = 1.0);
  void add_loops(std::span<const Loop> loops, const std::string& color, double width = 0.5);
  std::string str() const;

 private:
  GridFrame frame_;
  std::vector<std::string> elements_;
};

}  // namespace lsoup
