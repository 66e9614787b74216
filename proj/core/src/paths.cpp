#include "fdtm/paths.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>

#include "fdtm/error.hpp"
#include "fdtm/parallel.hpp"

namespace fdtm {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Label {
  double dist;
  std::size_t vertex;
  friend bool operator>(const Label& a, const Label& b) noexcept {
    return a.dist > b.dist || (a.dist == b.dist && a.vertex > b.vertex);
  }
};

/// for_each_arc(u, relax) must call relax(v, w) for every arc u -> v.
template <typename ForEachArc>
void dijkstra(std::size_t n, std::size_t source, std::size_t target, ForEachArc&& for_each_arc,
              std::vector<double>& dist, std::vector<std::size_t>& pred) {
  dist.assign(n, kUnreachable);
  pred.assign(n, kNone);
  std::vector<char> settled(n, 0);
  std::priority_queue<Label, std::vector<Label>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    const Label top = heap.top();
    heap.pop();
    const std::size_t u = top.vertex;
    if (settled[u] || top.dist > dist[u]) continue;
    settled[u] = 1;
    if (u == target) break;
    for_each_arc(u, [&](std::size_t v, double w) {
      if (settled[v]) return;
      const double cand = dist[u] + w;
      if (cand < dist[v]) {
        dist[v] = cand;
        pred[v] = u;
        heap.push({cand, v});
      } else if (cand == dist[v] && u < pred[v]) {
        pred[v] = u;
      }
    });
  }
}

}  // namespace

std::vector<std::size_t> ShortestPathTree::path_to(std::size_t v) const {
  std::vector<std::size_t> path;
  if (v >= dist.size() || dist[v] == kUnreachable) return path;
  for (std::optional<std::size_t> cur = v; cur; cur = pred[*cur]) path.push_back(*cur);
  std::reverse(path.begin(), path.end());
  return path;
}

ShortestPathTree single_source(const MetricGraph& graph, std::size_t source) {
  if (source >= graph.size()) throw InvalidInput("source vertex out of range");
  std::vector<double> dist;
  std::vector<std::size_t> pred;
  dijkstra(
      graph.size(), source, kNone,
      [&](std::size_t u, auto&& relax) {
        for (const Arc& a : graph.neighbors(u)) relax(a.target, a.weight);
      },
      dist, pred);
  ShortestPathTree tree;
  tree.source = source;
  tree.dist = std::move(dist);
  tree.pred.resize(pred.size());
  for (std::size_t v = 0; v < pred.size(); ++v)
    if (pred[v] != kNone) tree.pred[v] = pred[v];
  return tree;
}

std::vector<std::vector<double>> all_pairs_sampled(const MetricGraph& graph, const std::vector<std::size_t>& sources,
                                                   unsigned threads) {
  for (std::size_t s : sources)
    if (s >= graph.size()) throw InvalidInput("source vertex out of range");
  std::vector<std::vector<double>> rows(sources.size());
  parallel_for(sources.size(), threads, [&](std::size_t r) { rows[r] = single_source(graph, sources[r]).dist; });
  return rows;
}

double polyline_length(const PointCloud& polyline) noexcept {
  double total = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) total += distance(polyline[i - 1], polyline[i]);
  return total;
}

GeodesicResult vertex_geodesic(const MetricGraph& graph, const ShortestPathTree& tree, std::size_t target) {
  GeodesicResult out;
  out.polyline = PointCloud(graph.vertices().dim());
  if (target >= tree.dist.size()) throw InvalidInput("target vertex out of range");
  out.distance = tree.dist[target];
  out.vertex_ids = tree.path_to(target);
  for (std::size_t v : out.vertex_ids) out.polyline.push_back(graph.vertices()[v]);
  out.euclidean_length = polyline_length(out.polyline);
  return out;
}

namespace {

GeodesicResult query_ordered(const SpatialIndex& measure, const MetricGraph& graph, PointView x, PointView y,
                             const DtmParams& params) {
  params.validate();
  const std::size_t dim = graph.vertices().dim();
  if (x.size() != dim || y.size() != dim) throw InvalidInput("query point dimension does not match the graph");
  const bool dtm_weights = !std::holds_alternative<SampleFermat>(graph.weight_mode());
  if (dtm_weights && !(params == graph.params()))
    throw InvalidInput("query parameters differ from the parameters the graph was weighted with");
  if (dtm_weights && measure.dim() != dim) throw InvalidInput("measure dimension does not match the graph");

  GeodesicResult out;
  out.polyline = PointCloud(dim);
  if (std::equal(x.begin(), x.end(), y.begin(), y.end())) {
    out.distance = 0.0;
    out.polyline.push_back(x);
    return out;
  }

  const std::size_t n = graph.size();
  auto find_vertex = [&](PointView q) {
    for (std::size_t v = 0; v < n; ++v) {
      const auto p = graph.vertices()[v];
      if (std::equal(p.begin(), p.end(), q.begin(), q.end())) return v;
    }
    return kNone;
  };
  const std::size_t x_vertex = find_vertex(x);
  const std::size_t y_vertex = find_vertex(y);
  const std::size_t x_node = x_vertex != kNone ? x_vertex : n;
  const std::size_t y_node = y_vertex != kNone ? y_vertex : n + 1;

  EdgeWeigher weigh(dtm_weights ? &measure : nullptr, graph.weight_mode(), params);
  const bool endpoint_mode = std::holds_alternative<EndpointAverageDtm>(graph.weight_mode());
  std::vector<double> vertex_pow;
  if (endpoint_mode) {
    vertex_pow.resize(n);
    for (std::size_t v = 0; v < n; ++v) vertex_pow[v] = weigh.endpoint_power(graph.vertices()[v]);
  }
  auto pow_of = [&](std::size_t v) { return endpoint_mode ? vertex_pow[v] : 0.0; };

  std::vector<std::uint32_t> fan_order;
  const auto* subdivided = std::get_if<SubdividedDtm>(&graph.weight_mode());
  if (subdivided) fan_order = SpatialIndex(graph.vertices()).locality_order();

  // Straight edges from a virtual query node to all graph vertices.
  auto link_all = [&](PointView q) {
    std::vector<double> w(n);
    if (subdivided) {
      DtmEvaluator eval(measure, params);
      const auto fan = eval.segment_fan(q, graph.vertices(), fan_order, subdivided->subdivisions);
      for (std::size_t k = 0; k < n; ++k) w[fan_order[k]] = fan[k];
      return w;
    }
    const double q_pow = endpoint_mode ? weigh.endpoint_power(q) : 0.0;
    for (std::size_t v = 0; v < n; ++v)
      w[v] = weigh.with_endpoint_powers(q, graph.vertices()[v], q_pow, pow_of(v));
    return w;
  };
  std::vector<double> wx;
  std::vector<double> wy;
  if (x_vertex == kNone) wx = link_all(x);
  if (y_vertex == kNone) wy = link_all(y);
  double wxy = kUnreachable;
  if (x_vertex == kNone && y_vertex == kNone) {
    const double xp = endpoint_mode ? weigh.endpoint_power(x) : 0.0;
    const double yp = endpoint_mode ? weigh.endpoint_power(y) : 0.0;
    wxy = weigh.with_endpoint_powers(x, y, xp, yp);
  }

  std::vector<double> dist;
  std::vector<std::size_t> pred;
  dijkstra(
      n + 2, x_node, y_node,
      [&](std::size_t u, auto&& relax) {
        if (u < n) {
          for (const Arc& a : graph.neighbors(u)) relax(a.target, a.weight);
          if (!wx.empty()) relax(n, wx[u]);
          if (!wy.empty()) relax(n + 1, wy[u]);
        } else {
          const auto& w = u == n ? wx : wy;
          for (std::size_t v = 0; v < n; ++v) relax(v, w[v]);
          if (wxy != kUnreachable) relax(u == n ? n + 1 : n, wxy);
        }
      },
      dist, pred);

  if (dist[y_node] == kUnreachable) throw std::logic_error("query endpoints are disconnected");
  out.distance = dist[y_node];
  std::vector<std::size_t> nodes;
  for (std::size_t cur = y_node; cur != kNone; cur = pred[cur]) nodes.push_back(cur);
  std::reverse(nodes.begin(), nodes.end());
  for (std::size_t node : nodes) {
    if (node == n) {
      out.polyline.push_back(x);
    } else if (node == n + 1) {
      out.polyline.push_back(y);
    } else {
      out.polyline.push_back(graph.vertices()[node]);
      out.vertex_ids.push_back(node);
    }
  }
  out.euclidean_length = polyline_length(out.polyline);
  return out;
}

}  // namespace

GeodesicResult fdtm_query(const SpatialIndex& measure, const MetricGraph& graph, PointView x, PointView y,
                          const DtmParams& params) {
  // Path sums are accumulated from the source, so a fixed endpoint order keeps
  // the distance exactly symmetric.
  if (!std::lexicographical_compare(y.begin(), y.end(), x.begin(), x.end()))
    return query_ordered(measure, graph, x, y, params);
  GeodesicResult swapped = query_ordered(measure, graph, y, x, params);
  GeodesicResult out;
  out.distance = swapped.distance;
  out.euclidean_length = swapped.euclidean_length;
  out.polyline = PointCloud(swapped.polyline.dim());
  for (std::size_t i = swapped.polyline.size(); i-- > 0;) out.polyline.push_back(swapped.polyline[i]);
  out.vertex_ids.assign(swapped.vertex_ids.rbegin(), swapped.vertex_ids.rend());
  return out;
}

GeodesicResult fdtm_query(const WeightedMeasure& measure, const MetricGraph& graph, PointView x, PointView y,
                          const DtmParams& params) {
  const SpatialIndex index(measure);
  return fdtm_query(index, graph, x, y, params);
}

}  // namespace fdtm
