#include "fdtm/spatial_index.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "fdtm/error.hpp"

namespace fdtm {

SpatialIndex::SpatialIndex(const WeightedMeasure& measure)
    : points_(measure.support()),
      masses_(measure.masses().begin(), measure.masses().end()),
      uniform_(measure.uniform()) {
  build();
}

SpatialIndex::SpatialIndex(const PointCloud& cloud) : points_(cloud) {
  if (cloud.empty()) throw InvalidInput("cannot index an empty cloud");
  masses_.assign(cloud.size(), 1.0 / static_cast<double>(cloud.size()));
  uniform_ = true;
  build();
}

void SpatialIndex::build() {
  if (size() > std::numeric_limits<std::uint32_t>::max()) throw InvalidInput("point set too large to index");
  if (size() < kLinearScanLimit) return;
  order_.resize(size());
  std::iota(order_.begin(), order_.end(), 0U);
  nodes_.reserve(2 * size() / kLeafSize + 1);
  build_node(0, static_cast<std::uint32_t>(size()));

  const std::size_t d = dim();
  ordered_coords_.resize(size() * d);
  for (std::size_t slot = 0; slot < size(); ++slot) {
    const auto p = points_[order_[slot]];
    std::copy(p.begin(), p.end(), ordered_coords_.begin() + static_cast<std::ptrdiff_t>(slot * d));
  }
}

std::int32_t SpatialIndex::build_node(std::uint32_t begin, std::uint32_t end) {
  const std::size_t d = dim();
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  boxes_.resize(boxes_.size() + 2 * d);
  double* lo = boxes_.data() + static_cast<std::size_t>(id) * 2 * d;
  double* hi = lo + d;
  std::fill(lo, lo + d, std::numeric_limits<double>::infinity());
  std::fill(hi, hi + d, -std::numeric_limits<double>::infinity());
  for (std::uint32_t s = begin; s < end; ++s) {
    const auto p = points_[order_[s]];
    for (std::size_t a = 0; a < d; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  if (end - begin <= kLeafSize) return id;

  std::size_t axis = 0;
  for (std::size_t a = 1; a < d; ++a)
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  if (hi[axis] <= lo[axis]) return id;  // all points coincide

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) { return points_[a][axis] < points_[b][axis]; });
  const std::int32_t left = build_node(begin, mid);
  const std::int32_t right = build_node(mid, end);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

double SpatialIndex::box_distance(std::size_t node, PointView q) const noexcept {
  const std::size_t d = dim();
  const double* lo = boxes_.data() + node * 2 * d;
  const double* hi = lo + d;
  double acc = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    double diff = 0.0;
    if (q[a] < lo[a]) diff = lo[a] - q[a];
    else if (q[a] > hi[a]) diff = q[a] - hi[a];
    acc += diff * diff;
  }
  return acc;
}

void SpatialIndex::check_query(PointView q) const {
  if (q.size() != dim()) throw InvalidInput("query dimension does not match the indexed points");
}

std::vector<Neighbor> SpatialIndex::knn(PointView query, std::size_t k) const {
  std::vector<Neighbor> out;
  knn(query, k, out);
  return out;
}

std::vector<std::uint32_t> SpatialIndex::locality_order() const {
  if (uses_tree()) return order_;
  std::vector<std::uint32_t> order(size());
  std::iota(order.begin(), order.end(), 0U);
  return order;
}

std::vector<Neighbor> SpatialIndex::knn_linear(PointView query, std::size_t k) const {
  check_query(query);
  std::vector<Neighbor> all(size());
  for (std::size_t i = 0; i < size(); ++i)
    all[i] = Neighbor{static_cast<std::uint32_t>(i), squared_distance(query, points_[i])};
  k = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
  all.resize(k);
  return all;
}

void SpatialIndex::knn(PointView query, std::size_t k, std::vector<Neighbor>& out) const {
  k = std::min(k, size());
  within(query, knn_radius_bound(query, k), out);
  const auto kth = out.begin() + static_cast<std::ptrdiff_t>(k);
  std::partial_sort(out.begin(), kth, out.end());
  out.resize(k);
}

double SpatialIndex::knn_radius_bound(PointView query, std::size_t k) const {
  check_query(query);
  k = std::min(k, size());
  if (k == 0) return 0.0;
  std::vector<double> dist2;
  if (!uses_tree()) {
    for (std::size_t i = 0; i < size(); ++i) dist2.push_back(squared_distance(query, points_[i]));
  } else {
    const std::size_t d = dim();
    std::vector<std::pair<double, std::size_t>> frontier{{0.0, 0}};
    const auto cmp = [](const auto& a, const auto& b) { return a.first > b.first; };
    dist2.reserve(k + kLeafSize);
    while (!frontier.empty() && dist2.size() < k) {
      std::pop_heap(frontier.begin(), frontier.end(), cmp);
      const std::size_t id = frontier.back().second;
      frontier.pop_back();
      const Node& node = nodes_[id];
      if (node.left < 0) {
        for (std::uint32_t s = node.begin; s < node.end; ++s) {
          const double* p = ordered_coords_.data() + static_cast<std::size_t>(s) * d;
          double acc = 0.0;
          for (std::size_t a = 0; a < d; ++a) {
            const double diff = query[a] - p[a];
            acc += diff * diff;
          }
          dist2.push_back(acc);
        }
        continue;
      }
      for (const std::int32_t child : {node.left, node.right}) {
        const auto c = static_cast<std::size_t>(child);
        frontier.emplace_back(box_distance(c, query), c);
        std::push_heap(frontier.begin(), frontier.end(), cmp);
      }
    }
  }
  const auto kth = dist2.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(dist2.begin(), kth, dist2.end());
  return *kth;
}

namespace {

template <std::size_t D, typename Emit>
void scan_leaf(const double* p, const std::uint32_t* order, std::size_t count, const double* q, double squared_radius,
               Emit& emit) {
  for (std::size_t s = 0; s < count; ++s, p += D) {
    double acc = 0.0;
    for (std::size_t a = 0; a < D; ++a) {
      const double diff = q[a] - p[a];
      acc += diff * diff;
    }
    if (acc <= squared_radius) emit(order[s], acc);
  }
}

template <typename Emit>
void scan_leaf_dynamic(const double* p, const std::uint32_t* order, std::size_t count, std::size_t d,
                       const double* q, double squared_radius, Emit& emit) {
  for (std::size_t s = 0; s < count; ++s, p += d) {
    double acc = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      const double diff = q[a] - p[a];
      acc += diff * diff;
    }
    if (acc <= squared_radius) emit(order[s], acc);
  }
}

}  // namespace

template <typename Emit>
void SpatialIndex::visit_ball(PointView query, double squared_radius, Emit&& emit) const {
  const std::size_t d = dim();
  if (!uses_tree()) {
    for (std::size_t i = 0; i < size(); ++i) {
      const double dist2 = squared_distance(query, points_[i]);
      if (dist2 <= squared_radius) emit(static_cast<std::uint32_t>(i), dist2);
    }
    return;
  }
  // Depth-first, left child first, so the output order depends only on the tree.
  std::int32_t stack[64];
  std::size_t top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[static_cast<std::size_t>(stack[--top])];
    if (node.left < 0) {
      const double* p = ordered_coords_.data() + static_cast<std::size_t>(node.begin) * d;
      const std::uint32_t* order = order_.data() + node.begin;
      const std::size_t count = node.end - node.begin;
      if (d == 2) scan_leaf<2>(p, order, count, query.data(), squared_radius, emit);
      else if (d == 3) scan_leaf<3>(p, order, count, query.data(), squared_radius, emit);
      else scan_leaf_dynamic(p, order, count, d, query.data(), squared_radius, emit);
      continue;
    }
    if (box_distance(static_cast<std::size_t>(node.right), query) <= squared_radius) stack[top++] = node.right;
    if (box_distance(static_cast<std::size_t>(node.left), query) <= squared_radius) stack[top++] = node.left;
  }
}

void SpatialIndex::within(PointView query, double squared_radius, std::vector<Neighbor>& out) const {
  check_query(query);
  out.clear();
  visit_ball(query, squared_radius, [&](std::uint32_t i, double d2) { out.push_back(Neighbor{i, d2}); });
}

void SpatialIndex::within_distances(PointView query, double squared_radius, std::vector<double>& out) const {
  check_query(query);
  out.clear();
  out.reserve(size());
  visit_ball(query, squared_radius, [&](std::uint32_t, double d2) { out.push_back(d2); });
}

}  // namespace fdtm
