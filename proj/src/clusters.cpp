#include "lsoup/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace lsoup {
namespace {

std::int64_t vertex_key(const LatticePoint& v) {
  return (static_cast<std::int64_t>(v.x()) << 32) ^ static_cast<std::uint32_t>(v.y());
}

std::int64_t pair_key(int a, int b) { return (static_cast<std::int64_t>(a) << 32) | static_cast<std::uint32_t>(b); }

bool same_lattice(std::span<const Loop* const> loops) {
  if (loops.empty()) return false;
  const int scale = loops.front()->scale;
  return std::all_of(loops.begin(), loops.end(), [&](const Loop* l) {
    return l->kind == LoopKind::lattice && l->scale == scale && scale > 0 && !l->vertices.empty();
  });
}

Eigen::AlignedBox2d bounds_of(const PointList& pts) {
  Eigen::AlignedBox2d box;
  for (const auto& p : pts) box.extend(p);
  return box;
}

std::vector<std::pair<int, int>> lattice_edges(std::span<const Loop* const> loops) {
  std::vector<std::pair<std::int64_t, int>> incidences;
  for (int i = 0; i < static_cast<int>(loops.size()); ++i) {
    for (const auto& v : loops[i]->vertices) incidences.emplace_back(vertex_key(v), i);
  }
  std::sort(incidences.begin(), incidences.end());
  incidences.erase(std::unique(incidences.begin(), incidences.end()), incidences.end());

  std::vector<std::pair<int, int>> edges;
  for (std::size_t lo = 0; lo < incidences.size();) {
    std::size_t hi = lo;
    while (hi < incidences.size() && incidences[hi].first == incidences[lo].first) ++hi;
    for (std::size_t a = lo; a < hi; ++a) {
      for (std::size_t b = a + 1; b < hi; ++b) edges.emplace_back(incidences[a].second, incidences[b].second);
    }
    lo = hi;
  }
  return edges;
}

// Uniform bucket grid over segment bounding boxes.
std::vector<std::pair<int, int>> polyline_edges(std::span<const Loop* const> loops) {
  Eigen::AlignedBox2d all;
  double total_length = 0.0;
  std::size_t segments = 0;
  for (const Loop* l : loops) {
    all.extend(bounds_of(l->points));
    for (std::size_t k = 0; k < l->segment_count(); ++k) total_length += (l->points[k + 1] - l->points[k]).norm();
    segments += std::max<std::size_t>(l->segment_count(), 1);
  }
  if (all.isEmpty()) return {};
  const double diag = all.diagonal().norm();
  double cell = std::max(2.0 * total_length / static_cast<double>(segments), diag / 4096.0);
  if (!(cell > 0.0)) cell = 1.0;

  struct Entry {
    int loop;
    int segment;
  };
  std::unordered_map<std::int64_t, std::vector<Entry>> buckets;
  const auto index = [&](double v, double base) { return static_cast<int>(std::floor((v - base) / cell)); };
  for (int i = 0; i < static_cast<int>(loops.size()); ++i) {
    const auto& pts = loops[i]->points;
    const std::size_t m = pts.size() == 1 ? 1 : loops[i]->segment_count();
    for (std::size_t k = 0; k < m; ++k) {
      const Point& a = pts[k];
      const Point& b = pts[std::min(k + 1, pts.size() - 1)];
      const int x0 = index(std::min(a.x(), b.x()), all.min().x()), x1 = index(std::max(a.x(), b.x()), all.min().x());
      const int y0 = index(std::min(a.y(), b.y()), all.min().y()), y1 = index(std::max(a.y(), b.y()), all.min().y());
      for (int x = x0; x <= x1; ++x) {
        for (int y = y0; y <= y1; ++y) buckets[pair_key(x, y)].push_back({i, static_cast<int>(k)});
      }
    }
  }

  std::unordered_set<std::int64_t> found;
  std::vector<std::pair<int, int>> edges;
  for (const auto& [key, entries] : buckets) {
    for (std::size_t a = 0; a < entries.size(); ++a) {
      for (std::size_t b = a + 1; b < entries.size(); ++b) {
        int la = entries[a].loop, lb = entries[b].loop;
        if (la == lb) continue;
        if (la > lb) std::swap(la, lb);
        if (found.count(pair_key(la, lb))) continue;
        const auto& pa = loops[entries[a].loop]->points;
        const auto& pb = loops[entries[b].loop]->points;
        const auto sa = static_cast<std::size_t>(entries[a].segment);
        const auto sb = static_cast<std::size_t>(entries[b].segment);
        const bool meet = segments_intersect<double>(pa[sa], pa[std::min(sa + 1, pa.size() - 1)], pb[sb],
                                                     pb[std::min(sb + 1, pb.size() - 1)]);
        if (meet) {
          found.insert(pair_key(la, lb));
          edges.emplace_back(la, lb);
        }
      }
    }
  }
  return edges;
}

IntersectionGraph finish_graph(int n, std::vector<std::pair<int, int>> edges) {
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  IntersectionGraph graph;
  graph.vertex_count = n;
  graph.adjacency.resize(static_cast<std::size_t>(n));
  for (const auto& [a, b] : edges) {
    graph.adjacency[a].push_back(b);
    graph.adjacency[b].push_back(a);
  }
  graph.edges = std::move(edges);
  return graph;
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && orient<double>(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && orient<double>(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::optional<CellIndex> first_cell(const RasterSet& raster) {
  const auto& cells = raster.cells();
  for (int j = 0; j < raster.height(); ++j) {
    for (int i = 0; i < raster.width(); ++i) {
      if (cells(i, j)) return raster.frame().lo + CellIndex(i, j);
    }
  }
  return std::nullopt;
}

}  // namespace

bool IntersectionGraph::has_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(a, b));
}

bool loops_intersect(const Loop& a, const Loop& b) {
  const Loop* pair[] = {&a, &b};
  if (same_lattice(pair)) {
    const auto& small = a.vertices.size() <= b.vertices.size() ? a.vertices : b.vertices;
    const auto& large = a.vertices.size() <= b.vertices.size() ? b.vertices : a.vertices;
    std::unordered_set<std::int64_t> keys;
    for (const auto& v : small) keys.insert(vertex_key(v));
    return std::any_of(large.begin(), large.end(), [&](const LatticePoint& v) { return keys.count(vertex_key(v)) > 0; });
  }
  if (!bounds_of(a.points).intersects(bounds_of(b.points))) return false;
  const auto seg = [](const Loop& l, std::size_t k) {
    return std::make_pair(l.points[k], l.points[std::min(k + 1, l.points.size() - 1)]);
  };
  const std::size_t ma = std::max<std::size_t>(a.segment_count(), 1);
  const std::size_t mb = std::max<std::size_t>(b.segment_count(), 1);
  for (std::size_t i = 0; i < ma; ++i) {
    const auto [p, q] = seg(a, i);
    for (std::size_t j = 0; j < mb; ++j) {
      const auto [r, s] = seg(b, j);
      if (segments_intersect<double>(p, q, r, s)) return true;
    }
  }
  return false;
}

IntersectionGraph build_graph(std::span<const Loop* const> subset) {
  const int n = static_cast<int>(subset.size());
  if (n < 2) return finish_graph(n, {});
  return finish_graph(n, same_lattice(subset) ? lattice_edges(subset) : polyline_edges(subset));
}

IntersectionGraph build_graph(std::span<const Loop> loops) {
  std::vector<const Loop*> ptrs;
  ptrs.reserve(loops.size());
  for (const auto& l : loops) ptrs.push_back(&l);
  return build_graph(std::span<const Loop* const>(ptrs));
}

std::vector<std::vector<int>> connected_components(const IntersectionGraph& graph) {
  std::vector<int> parent(static_cast<std::size_t>(graph.vertex_count));
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : graph.edges) {
    const int ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::vector<std::vector<int>> components;
  std::vector<int> slot(static_cast<std::size_t>(graph.vertex_count), -1);
  for (int v = 0; v < graph.vertex_count; ++v) {
    const int root = find(v);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(components.size());
      components.emplace_back();
    }
    components[slot[root]].push_back(v);
  }
  return components;
}

double diameter(std::span<const Point> points) {
  const auto hull = convex_hull(std::vector<Point>(points.begin(), points.end()));
  double best = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    for (std::size_t j = i + 1; j < hull.size(); ++j) best = std::max(best, (hull[i] - hull[j]).squaredNorm());
  }
  return std::sqrt(best);
}

Cluster make_cluster(std::span<const Loop> loops, std::vector<int> members, double h, int id) {
  std::vector<const Loop*> ptrs;
  ptrs.reserve(members.size());
  for (const int m : members) ptrs.push_back(&loops[static_cast<std::size_t>(m)]);
  Cluster cluster;
  cluster.id = id;
  cluster.loops = std::move(members);
  cluster.raster = rasterize(std::span<const Loop* const>(ptrs), h);
  cluster.topology = decompose(cluster.raster);
  const auto centers = cluster.raster.centers();
  cluster.diameter = diameter(centers);
  return cluster;
}

std::vector<Cluster> partition(std::span<const Loop> loops, const IntersectionGraph& graph, double h) {
  if (graph.vertex_count != static_cast<int>(loops.size())) {
    throw Error(Errc::invalid_argument, "graph does not match the loop collection");
  }
  std::vector<Cluster> clusters;
  for (auto& members : connected_components(graph)) {
    clusters.push_back(make_cluster(loops, std::move(members), h, static_cast<int>(clusters.size())));
  }
  return clusters;
}

void outermost_order(std::vector<Cluster>& clusters) {
  const std::size_t k = clusters.size();
  std::vector<std::optional<CellIndex>> reps(k);
  std::vector<std::int64_t> areas(k);
  for (std::size_t i = 0; i < k; ++i) {
    reps[i] = first_cell(clusters[i].raster);
    areas[i] = clusters[i].hull_area_cells();
  }
  std::vector<Eigen::AlignedBox2i> boxes(k);
  for (std::size_t i = 0; i < k; ++i) boxes[i] = clusters[i].raster.occupied_bounds();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (boxes[i].isEmpty() || boxes[j].isEmpty() || boxes[i].intersection(boxes[j]).isEmpty()) continue;
      if (!set_intersection(clusters[i].raster, clusters[j].raster).empty()) {
        throw Error(Errc::overlap_detected, "clusters " + std::to_string(clusters[i].id) + " and " +
                                                std::to_string(clusters[j].id) + " share a raster cell");
      }
    }
  }
  std::vector<std::vector<char>> inside(k, std::vector<char>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    if (!reps[i]) continue;
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j || !clusters[j].raster.frame().inside(*reps[i])) continue;
      if (clusters[j].topology.hull.test(*reps[i])) inside[i][j] = 1;
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    clusters[i].parent.reset();
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < k; ++j) {
      if (!inside[i][j]) continue;
      if (inside[j][i]) throw Error(Errc::overlap_detected, "clusters enclose each other");
      if (!best || areas[j] < areas[*best]) best = j;
    }
    if (best) clusters[i].parent = clusters[*best].id;
    clusters[i].outermost = !best.has_value();
  }
}

RasterSet carpet(const Domain& domain, std::span<const Cluster> outermost, double h) {
  RasterSet result = rasterize_domain(domain, h);
  for (const auto& c : outermost) {
    if (!c.outermost) throw Error(Errc::invalid_argument, "carpet takes outermost clusters only");
    const RasterSet interior = set_difference(c.topology.hull, c.topology.outer_boundary);
    result = set_difference(result, interior);
  }
  return result;
}

Cluster finite_subcluster_truncation(std::span<const Loop> loops, const Cluster& cluster, double t_keep) {
  if (!(t_keep > 0.0)) throw Error(Errc::invalid_argument, "t_keep must be positive");
  std::vector<int> kept;
  for (const int m : cluster.loops) {
    if (loops[static_cast<std::size_t>(m)].time_length >= t_keep) kept.push_back(m);
  }
  if (kept.empty()) throw Error(Errc::empty_truncation, "no loop of the cluster reaches the time threshold");

  std::vector<const Loop*> ptrs;
  for (const int m : kept) ptrs.push_back(&loops[static_cast<std::size_t>(m)]);
  const auto graph = build_graph(std::span<const Loop* const>(ptrs));

  std::size_t longest = 0;
  for (std::size_t i = 1; i < kept.size(); ++i) {
    if (ptrs[i]->time_length > ptrs[longest]->time_length) longest = i;
  }
  for (const auto& component : connected_components(graph)) {
    if (!std::binary_search(component.begin(), component.end(), static_cast<int>(longest))) continue;
    std::vector<int> members;
    for (const int c : component) members.push_back(kept[static_cast<std::size_t>(c)]);
    std::sort(members.begin(), members.end());
    return make_cluster(loops, std::move(members), cluster.raster.spacing(), cluster.id);
  }
  throw Error(Errc::empty_truncation, "longest loop has no component");
}

}  // namespace lsoup
