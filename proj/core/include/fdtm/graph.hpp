#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fdtm/dtm.hpp"
#include "fdtm/measures.hpp"
#include "fdtm/spatial_index.hpp"

namespace fdtm {

// Edge selection.
struct Complete {
  friend bool operator==(const Complete&, const Complete&) = default;
};
/// Edge (i, j) iff j is among the k nearest of i or vice versa.
struct KNearest {
  std::size_t k = 6;
  friend bool operator==(const KNearest&, const KNearest&) = default;
};
/// Planar Yao graph: per vertex, the nearest other vertex in each of `cones`
/// half-open angular sectors [2*pi*c/cones, 2*pi*(c+1)/cones) anchored at 0.
struct Yao {
  std::size_t cones = 6;
  friend bool operator==(const Yao&, const Yao&) = default;
};
using GraphTopology = std::variant<Complete, KNearest, Yao>;

// Edge weighting.
/// Midpoint rule with `subdivisions` samples of dtm^beta along the edge.
struct SubdividedDtm {
  std::size_t subdivisions = 8;
  friend bool operator==(const SubdividedDtm&, const SubdividedDtm&) = default;
};
/// |x - y| * (dtm(x)^beta + dtm(y)^beta) / 2.
struct EndpointAverageDtm {
  friend bool operator==(const EndpointAverageDtm&, const EndpointAverageDtm&) = default;
};
/// Sample Fermat weight |x - y|^alpha, alpha > 1.
struct SampleFermat {
  double alpha = 1.1;
  friend bool operator==(const SampleFermat&, const SampleFermat&) = default;
};
using WeightMode = std::variant<SubdividedDtm, EndpointAverageDtm, SampleFermat>;

/// max(6, ceil(log2 n)): default neighbour count, cone count and subdivision count.
std::size_t default_log_parameter(std::size_t n);

std::string describe(const GraphTopology& topology);
std::string describe(const WeightMode& weights);
void validate(const GraphTopology& topology);
void validate(const WeightMode& weights);

struct Edge {
  std::uint32_t i;
  std::uint32_t j;
  double weight;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Arc {
  std::uint32_t target;
  double weight;
};

/// Undirected weighted graph over a point set; each edge stored once with i < j.
class MetricGraph {
 public:
  MetricGraph(PointCloud vertices, std::vector<Edge> edges, GraphTopology topology, WeightMode weights,
              DtmParams params);

  [[nodiscard]] const PointCloud& vertices() const noexcept { return vertices_; }
  [[nodiscard]] std::size_t size() const noexcept { return vertices_.size(); }
  [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
  [[nodiscard]] std::span<const Arc> neighbors(std::size_t v) const noexcept {
    return {arcs_.data() + offsets_[v], arcs_.data() + offsets_[v + 1]};
  }
  [[nodiscard]] const GraphTopology& topology() const noexcept { return topology_; }
  [[nodiscard]] const WeightMode& weight_mode() const noexcept { return weights_; }
  [[nodiscard]] const DtmParams& params() const noexcept { return params_; }

  /// Same vertices, topology and metadata with every edge weight passed through fn(edge).
  template <typename Fn>
  [[nodiscard]] MetricGraph reweighted(Fn&& fn) const {
    std::vector<Edge> edges(edges_.begin(), edges_.end());
    for (auto& e : edges) e.weight = fn(e);
    return MetricGraph(vertices_, std::move(edges), topology_, weights_, params_);
  }

 private:
  PointCloud vertices_;
  std::vector<Edge> edges_;
  GraphTopology topology_;
  WeightMode weights_;
  DtmParams params_;
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
};

/// Computes weights of straight edges between arbitrary points under a weight mode.
class EdgeWeigher {
 public:
  /// `measure` may be null only for SampleFermat.
  EdgeWeigher(const SpatialIndex* measure, WeightMode weights, DtmParams params);

  double operator()(PointView a, PointView b);
  /// EndpointAverageDtm with known dtm^beta at the endpoints; other modes ignore them.
  double with_endpoint_powers(PointView a, PointView b, double a_pow, double b_pow);
  /// dtm(x)^beta, or 0 for SampleFermat.
  double endpoint_power(PointView x);

 private:
  WeightMode weights_;
  std::optional<DtmEvaluator> eval_;
};

/// Unordered candidate pairs (i < j) selected by the topology, sorted.
std::vector<std::pair<std::uint32_t, std::uint32_t>> select_edges(const PointCloud& vertices,
                                                                   const GraphTopology& topology);

/// Graph over `vertices` whose DTM weights use the measure indexed by `measure`.
MetricGraph build_graph(const PointCloud& vertices, const SpatialIndex& measure, const GraphTopology& topology,
                        const WeightMode& weights, const DtmParams& params, unsigned threads = 1);
/// Graph over the support of `measure`.
MetricGraph build_graph(const WeightedMeasure& measure, const GraphTopology& topology, const WeightMode& weights,
                        const DtmParams& params, unsigned threads = 1);
/// Graph over a sample with the DTM of its empirical measure.
MetricGraph build_graph(const PointCloud& cloud, const GraphTopology& topology, const WeightMode& weights,
                        const DtmParams& params, unsigned threads = 1);

struct EdgeCountReport {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  /// n * parameter for KNearest / Yao, n(n-1)/2 for Complete.
  std::size_t topology_bound = 0;
  /// n * ceil(log2 n).
  std::size_t nlogn_bound = 0;
  bool within_topology_bound = false;
  bool within_nlogn_bound = false;
  bool quadratic = false;
};

EdgeCountReport edge_count_bound_check(const MetricGraph& graph);

}  // namespace fdtm
