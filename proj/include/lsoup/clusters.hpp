#pragma once

#include "lsoup/plane_geom.hpp"
#include "lsoup/types.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace lsoup {

/// Undirected graph on loop indices; edges sorted with first < second.
struct IntersectionGraph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> adjacency;

  bool has_edge(int a, int b) const;
};

/// Lattice loops at the same scale intersect iff they share a vertex;
/// anything else goes through exact polyline segment tests.
bool loops_intersect(const Loop& a, const Loop& b);

IntersectionGraph build_graph(std::span<const Loop> loops);
/// Graph on a subset; vertices are positions in `subset`.
IntersectionGraph build_graph(std::span<const Loop* const> subset);

/// Connected components by union-find; each is sorted, components ordered by
/// their smallest member.
std::vector<std::vector<int>> connected_components(const IntersectionGraph& graph);

struct Cluster {
  int id = 0;
  /// Indices into the soup's loop vector.
  std::vector<int> loops;
  RasterSet raster;
  TopologyDecomposition topology;
  double diameter = 0.0;
  bool outermost = true;
  std::optional<int> parent;

  std::int64_t hull_area_cells() const { return topology.hull.count(); }
  std::int64_t outer_boundary_cells() const { return topology.outer_boundary.count(); }
};

/// Largest distance between two points of a set, via its convex hull.
double diameter(std::span<const Point> points);

Cluster make_cluster(std::span<const Loop> loops, std::vector<int> members, double h, int id = 0);

std::vector<Cluster> partition(std::span<const Loop> loops, const IntersectionGraph& graph, double h);

/// Sets parent (smallest enclosing hull) and outermost on every cluster.
void outermost_order(std::vector<Cluster>& clusters);

/// D minus the union over outermost clusters of (hull minus outer boundary),
/// on the domain's frame at spacing h.
RasterSet carpet(const Domain& domain, std::span<const Cluster> outermost, double h);

/// Loops of `cluster` with time length >= t_keep, restricted to the
/// intersection component holding the longest retained loop.
Cluster finite_subcluster_truncation(std::span<const Loop> loops, const Cluster& cluster, double t_keep);

}  // namespace lsoup
