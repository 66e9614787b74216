#include "fdtm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "fdtm/error.hpp"
#include "fdtm/parallel.hpp"

namespace fdtm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using Pair = std::pair<std::uint32_t, std::uint32_t>;

Pair ordered(std::size_t a, std::size_t b) {
  return a < b ? Pair{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)}
               : Pair{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(a)};
}

std::vector<Pair> complete_pairs(std::size_t n) {
  std::vector<Pair> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.push_back(ordered(i, j));
  return pairs;
}

std::vector<Pair> knn_pairs(const PointCloud& vertices, std::size_t k) {
  const std::size_t n = vertices.size();
  k = std::min(k, n - 1);
  const SpatialIndex index(vertices);
  std::vector<Pair> pairs;
  pairs.reserve(n * k);
  std::vector<Neighbor> nbrs;
  for (std::size_t i = 0; i < n; ++i) {
    index.knn(vertices[i], k + 1, nbrs);
    std::size_t taken = 0;
    for (const auto& nb : nbrs) {
      if (nb.index == i) continue;
      if (taken == k) break;
      pairs.push_back(ordered(i, nb.index));
      ++taken;
    }
  }
  return pairs;
}

// Monotone in the polar angle, mapping [0, 2pi) onto [0, 4).
double pseudo_angle(double dx, double dy) noexcept {
  if (dy >= 0.0) return dx >= 0.0 ? dy / (dx + dy) : 1.0 - dx / (dy - dx);
  return dx < 0.0 ? 2.0 - dy / (-dx - dy) : 3.0 + dx / (dx - dy);
}

std::size_t exact_cone(double dx, double dy, double sector, std::size_t cones) {
  double angle = std::atan2(dy, dx);
  if (angle < 0.0) angle += 2.0 * std::numbers::pi;
  return std::min(static_cast<std::size_t>(angle / sector), cones - 1);
}

std::vector<Pair> yao_pairs(const PointCloud& vertices, std::size_t cones) {
  const std::size_t n = vertices.size();
  const double sector = 2.0 * std::numbers::pi / static_cast<double>(cones);
  // Cone boundaries in pseudo-angle; atan2 decides only near a boundary.
  std::vector<double> bounds(cones + 1);
  for (std::size_t c = 0; c < cones; ++c) {
    const double a = sector * static_cast<double>(c);
    bounds[c] = c == 0 ? 0.0 : pseudo_angle(std::cos(a), std::sin(a));
  }
  bounds[cones] = 4.0;
  constexpr double kMargin = 1e-9;

  std::vector<Pair> pairs;
  pairs.reserve(n * cones);
  std::vector<Neighbor> best(cones);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(best.begin(), best.end(),
              Neighbor{std::numeric_limits<std::uint32_t>::max(), std::numeric_limits<double>::infinity()});
    const auto pi_ = vertices[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto pj = vertices[j];
      const double dx = pj[0] - pi_[0];
      const double dy = pj[1] - pi_[1];
      const Neighbor cand{static_cast<std::uint32_t>(j), dx * dx + dy * dy};
      if (cand.squared_distance == 0.0) {
        const std::size_t cone = exact_cone(dx, dy, sector, cones);
        if (cand < best[cone]) best[cone] = cand;
        continue;
      }
      const double pa = pseudo_angle(dx, dy);
      std::size_t cone = 0;
      while (pa >= bounds[cone + 1]) ++cone;
      if (pa - bounds[cone] < kMargin || bounds[cone + 1] - pa < kMargin) cone = exact_cone(dx, dy, sector, cones);
      if (cand < best[cone]) best[cone] = cand;
    }
    for (const auto& b : best)
      if (b.index != std::numeric_limits<std::uint32_t>::max()) pairs.push_back(ordered(i, b.index));
  }
  return pairs;
}

}  // namespace

std::size_t default_log_parameter(std::size_t n) {
  if (n <= 1) return 6;
  return std::max<std::size_t>(6, static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n)))));
}

std::string describe(const GraphTopology& topology) {
  return std::visit(Overloaded{[](const Complete&) { return std::string("complete"); },
                               [](const KNearest& t) { return "knn(k=" + std::to_string(t.k) + ")"; },
                               [](const Yao& t) { return "yao(cones=" + std::to_string(t.cones) + ")"; }},
                    topology);
}

std::string describe(const WeightMode& weights) {
  return std::visit(Overloaded{[](const SubdividedDtm& w) { return "subdiv(r=" + std::to_string(w.subdivisions) + ")"; },
                               [](const EndpointAverageDtm&) { return std::string("avg"); },
                               [](const SampleFermat& w) {
                                 std::ostringstream os;
                                 os.precision(17);
                                 os << "fermat(alpha=" << w.alpha << ")";
                                 return os.str();
                               }},
                    weights);
}

void validate(const GraphTopology& topology) {
  std::visit(Overloaded{[](const Complete&) {},
                        [](const KNearest& t) {
                          if (t.k < 1) throw InvalidInput("knn graph needs k >= 1");
                        },
                        [](const Yao& t) {
                          if (t.cones < 2) throw InvalidInput("yao graph needs at least 2 cones");
                        }},
             topology);
}

void validate(const WeightMode& weights) {
  std::visit(Overloaded{[](const SubdividedDtm& w) {
                          if (w.subdivisions < 1) throw InvalidInput("subdivision count must be >= 1");
                        },
                        [](const EndpointAverageDtm&) {},
                        [](const SampleFermat& w) {
                          if (!(w.alpha > 1.0) || !std::isfinite(w.alpha))
                            throw InvalidInput("sample Fermat exponent alpha must be > 1");
                        }},
             weights);
}

MetricGraph::MetricGraph(PointCloud vertices, std::vector<Edge> edges, GraphTopology topology, WeightMode weights,
                         DtmParams params)
    : vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      topology_(topology),
      weights_(weights),
      params_(params) {
  const std::size_t n = vertices_.size();
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    if (edge.i >= edge.j) throw InvalidInput("edges must satisfy i < j (no self-loops)");
    if (edge.j >= n) throw InvalidInput("edge endpoint out of range");
    if (!(edge.weight >= 0.0) || !std::isfinite(edge.weight))
      throw InvalidInput("edge weights must be finite and nonnegative");
    if (e > 0) {
      const Edge& prev = edges_[e - 1];
      if (prev.i == edge.i && prev.j == edge.j) throw InvalidInput("duplicate edge");
    }
  }
  std::vector<Pair> keys(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) keys[e] = {edges_[e].i, edges_[e].j};
  if (!std::is_sorted(keys.begin(), keys.end())) {
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
      return a.i < b.i || (a.i == b.i && a.j < b.j);
    });
    for (std::size_t e = 1; e < edges_.size(); ++e)
      if (edges_[e - 1].i == edges_[e].i && edges_[e - 1].j == edges_[e].j) throw InvalidInput("duplicate edge");
  }

  offsets_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.i + 1];
    ++offsets_[e.j + 1];
  }
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
  arcs_.resize(2 * edges_.size());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    arcs_[fill[e.i]++] = Arc{e.j, e.weight};
    arcs_[fill[e.j]++] = Arc{e.i, e.weight};
  }
}

EdgeWeigher::EdgeWeigher(const SpatialIndex* measure, WeightMode weights, DtmParams params) : weights_(weights) {
  validate(weights_);
  params.validate();
  if (!std::holds_alternative<SampleFermat>(weights_)) {
    if (measure == nullptr) throw InvalidInput("DTM weights need a measure");
    eval_.emplace(*measure, params);
  }
}

double EdgeWeigher::endpoint_power(PointView x) { return eval_ ? eval_->powered(x) : 0.0; }

double EdgeWeigher::with_endpoint_powers(PointView a, PointView b, double a_pow, double b_pow) {
  return std::visit(Overloaded{[&](const SubdividedDtm& w) { return eval_->segment_integral(a, b, w.subdivisions); },
                               [&](const EndpointAverageDtm&) { return distance(a, b) * 0.5 * (a_pow + b_pow); },
                               [&](const SampleFermat& w) { return std::pow(distance(a, b), w.alpha); }},
                    weights_);
}

double EdgeWeigher::operator()(PointView a, PointView b) {
  if (std::holds_alternative<EndpointAverageDtm>(weights_))
    return with_endpoint_powers(a, b, endpoint_power(a), endpoint_power(b));
  return with_endpoint_powers(a, b, 0.0, 0.0);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> select_edges(const PointCloud& vertices,
                                                                  const GraphTopology& topology) {
  validate(topology);
  const std::size_t n = vertices.size();
  if (n < 2) throw InvalidInput("a graph needs at least 2 vertices");
  if (n > std::numeric_limits<std::uint32_t>::max()) throw InvalidInput("too many vertices");
  if (std::holds_alternative<Yao>(topology) && vertices.dim() != 2)
    throw Unsupported("yao graphs are only supported in dimension 2 (got dimension " +
                      std::to_string(vertices.dim()) + ")");

  std::vector<Pair> pairs = std::visit(Overloaded{[&](const Complete&) { return complete_pairs(n); },
                                                  [&](const KNearest& t) { return knn_pairs(vertices, t.k); },
                                                  [&](const Yao& t) { return yao_pairs(vertices, t.cones); }},
                                       topology);
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

MetricGraph build_graph(const PointCloud& vertices, const SpatialIndex& measure, const GraphTopology& topology,
                        const WeightMode& weights, const DtmParams& params, unsigned threads) {
  params.validate();
  validate(weights);
  if (vertices.dim() != measure.dim()) throw InvalidInput("vertex dimension does not match the measure");
  const auto pairs = select_edges(vertices, topology);

  std::vector<double> powers;
  if (std::holds_alternative<EndpointAverageDtm>(weights)) {
    powers = dtm_batch(measure, vertices, params, threads);
    const DtmEvaluator raise(measure, params);
    for (double& v : powers) v = raise.raise_beta(v);
  }

  std::vector<Edge> edges(pairs.size());
  if (const auto* sub = std::get_if<SubdividedDtm>(&weights)) {
    // Edges grouped by their smaller endpoint, each group swept as one fan.
    std::vector<std::uint32_t> rank(vertices.size());
    const auto order = SpatialIndex(vertices).locality_order();
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<std::uint32_t>(r);
    std::vector<std::size_t> group_start;
    for (std::size_t e = 0; e < pairs.size(); ++e)
      if (e == 0 || pairs[e].first != pairs[e - 1].first) group_start.push_back(e);
    group_start.push_back(pairs.size());

    parallel_for(group_start.size() - 1, threads, [&](std::size_t g) {
      DtmEvaluator eval(measure, params);
      const std::size_t begin = group_start[g];
      const std::size_t end = group_start[g + 1];
      std::vector<std::size_t> slots(end - begin);
      std::iota(slots.begin(), slots.end(), begin);
      std::sort(slots.begin(), slots.end(),
                [&](std::size_t a, std::size_t b) { return rank[pairs[a].second] < rank[pairs[b].second]; });
      std::vector<std::uint32_t> targets(slots.size());
      for (std::size_t k = 0; k < slots.size(); ++k) targets[k] = pairs[slots[k]].second;
      const std::uint32_t origin = pairs[begin].first;
      const auto w = eval.segment_fan(vertices[origin], vertices, targets, sub->subdivisions);
      for (std::size_t k = 0; k < slots.size(); ++k) edges[slots[k]] = Edge{origin, targets[k], w[k]};
    });
    return MetricGraph(vertices, std::move(edges), topology, weights, params);
  }

  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (pairs.size() + kChunk - 1) / kChunk;
  parallel_for(chunks, threads, [&](std::size_t c) {
    EdgeWeigher weigh(&measure, weights, params);
    const std::size_t end = std::min(pairs.size(), (c + 1) * kChunk);
    for (std::size_t e = c * kChunk; e < end; ++e) {
      const auto [i, j] = pairs[e];
      const double w = powers.empty() ? weigh(vertices[i], vertices[j])
                                      : weigh.with_endpoint_powers(vertices[i], vertices[j], powers[i], powers[j]);
      edges[e] = Edge{i, j, w};
    }
  });
  return MetricGraph(vertices, std::move(edges), topology, weights, params);
}

MetricGraph build_graph(const WeightedMeasure& measure, const GraphTopology& topology, const WeightMode& weights,
                        const DtmParams& params, unsigned threads) {
  const SpatialIndex index(measure);
  return build_graph(measure.support(), index, topology, weights, params, threads);
}

MetricGraph build_graph(const PointCloud& cloud, const GraphTopology& topology, const WeightMode& weights,
                        const DtmParams& params, unsigned threads) {
  if (cloud.empty()) throw InvalidInput("cannot build a graph on an empty cloud");
  const SpatialIndex index(cloud);
  return build_graph(cloud, index, topology, weights, params, threads);
}

EdgeCountReport edge_count_bound_check(const MetricGraph& graph) {
  EdgeCountReport r;
  r.vertices = graph.size();
  r.edges = graph.edge_count();
  const std::size_t n = r.vertices;
  const auto log_n = n <= 1 ? std::size_t{0} : static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n))));
  r.nlogn_bound = n * log_n;
  r.topology_bound = std::visit(Overloaded{[&](const Complete&) { return n * (n - 1) / 2; },
                                           [&](const KNearest& t) { return n * t.k; },
                                           [&](const Yao& t) { return n * t.cones; }},
                                graph.topology());
  r.within_topology_bound = r.edges <= r.topology_bound;
  r.within_nlogn_bound = r.edges <= r.nlogn_bound;
  r.quadratic = std::holds_alternative<Complete>(graph.topology());
  return r;
}

}  // namespace fdtm
