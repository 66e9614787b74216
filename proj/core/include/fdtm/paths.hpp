#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "fdtm/graph.hpp"
#include "fdtm/measures.hpp"
#include "fdtm/spatial_index.hpp"

namespace fdtm {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct ShortestPathTree {
  std::size_t source = 0;
  std::vector<double> dist;
  std::vector<std::optional<std::size_t>> pred;

  /// Vertices from the source to v inclusive; empty when v is unreachable.
  [[nodiscard]] std::vector<std::size_t> path_to(std::size_t v) const;
};

/// Dijkstra from `source`. Among equally short routes the predecessor with the
/// smallest index wins.
ShortestPathTree single_source(const MetricGraph& graph, std::size_t source);

/// Row s holds single_source(graph, sources[s]).dist.
std::vector<std::vector<double>> all_pairs_sampled(const MetricGraph& graph, const std::vector<std::size_t>& sources,
                                                   unsigned threads = 1);

struct GeodesicResult {
  double distance = kUnreachable;
  /// x, the graph vertices visited, then y.
  PointCloud polyline;
  /// Graph vertex ids of the interior polyline points (and of x or y when they
  /// coincide with a vertex).
  std::vector<std::size_t> vertex_ids;
  double euclidean_length = 0.0;
};

/// Empirical FDTM between arbitrary points.
///
/// x and y join the graph as temporary vertices linked by straight edges to
/// every graph vertex and to each other, weighted with the graph's weight
/// mode. A query point equal to a graph vertex is identified with it, so
/// vertex-to-vertex queries return the plain graph distance.
GeodesicResult fdtm_query(const SpatialIndex& measure, const MetricGraph& graph, PointView x, PointView y,
                          const DtmParams& params);
GeodesicResult fdtm_query(const WeightedMeasure& measure, const MetricGraph& graph, PointView x, PointView y,
                          const DtmParams& params);

/// Polyline of graph vertices for a path produced by single_source.
GeodesicResult vertex_geodesic(const MetricGraph& graph, const ShortestPathTree& tree, std::size_t target);

double polyline_length(const PointCloud& polyline) noexcept;

}  // namespace fdtm
