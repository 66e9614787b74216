#include "fdtm/dtm.hpp"

#include <algorithm>
#include <cmath>

#include "fdtm/error.hpp"
#include "fdtm/parallel.hpp"

namespace fdtm {

namespace {

double radius_power(double squared, double p) noexcept {
  if (p == 2.0) return squared;
  if (p == 1.0) return std::sqrt(squared);
  return std::pow(squared, 0.5 * p);
}

double root(double value, double p) noexcept {
  if (p == 2.0) return std::sqrt(value);
  if (p == 1.0) return value;
  return std::pow(value, 1.0 / p);
}

}  // namespace

DtmEvaluator::DtmEvaluator(const SpatialIndex& index, const DtmParams& params) : index_(&index), params_(params) {
  params_.validate();
  if (index.uniform()) {
    const auto n = static_cast<double>(index.size());
    const auto atoms = static_cast<std::size_t>(std::ceil(params_.m * n));
    uniform_atoms_ = std::clamp<std::size_t>(atoms, 1, index.size());
  } else {
    const auto masses = index.masses();
    const double heaviest = *std::max_element(masses.begin(), masses.end());
    const auto atoms = static_cast<std::size_t>(std::ceil(params_.m / heaviest));
    min_atoms_ = std::clamp<std::size_t>(atoms, 1, index.size());
  }
}

double DtmEvaluator::raise_beta(double d) const noexcept {
  if (params_.beta == 1.0) return d;
  if (params_.beta == 2.0) return d * d;
  return std::pow(d, params_.beta);
}

double DtmEvaluator::uniform_from_candidates(double known_below) {
  // Atoms strictly closer than known_below are among the k nearest, so only
  // the band above it needs a selection pass.
  const std::size_t k = uniform_atoms_;
  std::size_t below = 0;
  selection_.clear();
  for (const double d2 : distances_) {
    if (d2 < known_below) ++below;
    else selection_.push_back(d2);
  }
  if (below >= k) return std::nan("");
  const auto kth_it = selection_.begin() + static_cast<std::ptrdiff_t>(k - 1 - below);
  std::nth_element(selection_.begin(), kth_it, selection_.end());
  const double kth = *kth_it;

  // Sum in candidate order, which depends only on the kd-tree, so the result
  // is bitwise independent of the search radius that produced the candidates.
  double inner = 0.0;
  std::size_t closer = 0;
  for (const double d2 : distances_) {
    if (d2 < kth) {
      inner += radius_power(d2, params_.p);
      ++closer;
    }
  }
  const double kth_power = radius_power(kth, params_.p);
  inner += static_cast<double>(k - 1 - closer) * kth_power;

  const double w = index_->masses()[0];
  const double last_share = std::clamp(params_.m - static_cast<double>(k - 1) * w, 0.0, w);
  last_radius_ = std::sqrt(kth);
  return root((w * inner + last_share * kth_power) / params_.m, params_.p);
}

double DtmEvaluator::finish_sorted(std::size_t count) {
  // Returns NaN when the first `count` atoms carry less than mass m.
  const auto masses = index_->masses();
  double cumulative = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    if (cumulative >= params_.m) break;
    const double w = masses[scratch_[j].index];
    const double next = cumulative + w;
    const double share = std::clamp(std::min(next, params_.m) - cumulative, 0.0, w);
    total += share * radius_power(scratch_[j].squared_distance, params_.p);
    last_radius_ = std::sqrt(scratch_[j].squared_distance);
    cumulative = next;
  }
  if (cumulative < params_.m && count < index_->size()) return std::nan("");
  return root(total / params_.m, params_.p);
}

double DtmEvaluator::value(PointView x) {
  if (x.size() != index_->dim()) throw InvalidInput("query dimension does not match the measure");
  // The radius enclosing mass m is 1-Lipschitz, so the previous query bounds it.
  if (!last_query_.empty()) {
    const double bound = last_radius_ + distance(x, last_query_);
    if (bound <= 2.0 * last_radius_) return value_bracketed(x, last_radius_ - (bound - last_radius_), bound);
  }
  return value_unbounded(x);
}

double DtmEvaluator::value_unbounded(PointView x) {
  double d = 0.0;
  if (index_->uniform()) {
    index_->within_distances(x, index_->knn_radius_bound(x, uniform_atoms_), distances_);
    d = uniform_from_candidates(0.0);
  } else {
    const std::size_t n = index_->size();
    for (std::size_t k = min_atoms_;; k = std::min(n, 2 * k)) {
      index_->knn(x, k, scratch_);
      d = finish_sorted(scratch_.size());
      if (!std::isnan(d)) break;
    }
  }
  last_query_.assign(x.begin(), x.end());
  return d;
}

double DtmEvaluator::value_bounded(PointView x, double radius_bound) {
  return value_bracketed(x, 0.0, radius_bound);
}

double DtmEvaluator::value_bracketed(PointView x, double radius_floor, double radius_bound) {
  const double r = radius_bound * (1.0 + 1e-12) + 1e-300;
  double d = 0.0;
  if (index_->uniform()) {
    index_->within_distances(x, r * r, distances_);
    if (distances_.size() < uniform_atoms_) return value_unbounded(x);
    const double floor = std::max(0.0, radius_floor - 1e-12 * radius_bound);
    d = uniform_from_candidates(floor * floor);
    if (std::isnan(d)) return value_unbounded(x);
  } else {
    index_->within(x, r * r, scratch_);
    std::sort(scratch_.begin(), scratch_.end());
    d = finish_sorted(scratch_.size());
    if (std::isnan(d)) return value_unbounded(x);
  }
  last_query_.assign(x.begin(), x.end());
  return d;
}

namespace {

bool canonical_first(PointView x, PointView y) {
  return !std::lexicographical_compare(y.begin(), y.end(), x.begin(), x.end());
}

void segment_midpoint(PointView x, PointView y, std::size_t t, std::size_t subdivisions, std::vector<double>& out) {
  const double s = (static_cast<double>(t) + 0.5) / static_cast<double>(subdivisions);
  for (std::size_t a = 0; a < x.size(); ++a) out[a] = x[a] + s * (y[a] - x[a]);
}

}  // namespace

double DtmEvaluator::segment_integral(PointView x, PointView y, std::size_t subdivisions) {
  if (subdivisions == 0) throw InvalidInput("segment subdivision count must be at least 1");
  if (x.size() != index_->dim() || y.size() != index_->dim())
    throw InvalidInput("segment endpoint dimension does not match the measure");
  // Canonical orientation makes the result exactly symmetric.
  if (!canonical_first(x, y)) std::swap(x, y);
  const double length = distance(x, y);
  if (length == 0.0) return 0.0;

  midpoint_.resize(x.size());
  double sum = 0.0;
  for (std::size_t t = 0; t < subdivisions; ++t) {
    segment_midpoint(x, y, t, subdivisions, midpoint_);
    sum += raise_beta(value(midpoint_));
  }
  return (length / static_cast<double>(subdivisions)) * sum;
}

std::vector<double> DtmEvaluator::segment_fan(PointView origin, const PointCloud& points,
                                              std::span<const std::uint32_t> targets, std::size_t subdivisions) {
  if (subdivisions == 0) throw InvalidInput("segment subdivision count must be at least 1");
  if (origin.size() != index_->dim() || points.dim() != index_->dim())
    throw InvalidInput("segment endpoint dimension does not match the measure");
  const std::size_t count = targets.size();
  std::vector<double> powered(count * subdivisions);
  midpoint_.resize(origin.size());
  // Sweep the midpoints at a fixed position along every segment together, so
  // consecutive queries are close whenever the targets are.
  for (std::size_t step = 0; step < subdivisions; ++step) {
    for (std::size_t k = 0; k < count; ++k) {
      const PointView target = points[targets[k]];
      const bool forward = canonical_first(origin, target);
      const std::size_t t = forward ? step : subdivisions - 1 - step;
      if (forward) segment_midpoint(origin, target, t, subdivisions, midpoint_);
      else segment_midpoint(target, origin, t, subdivisions, midpoint_);
      powered[k * subdivisions + t] = raise_beta(value(midpoint_));
    }
  }
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double length = distance(origin, points[targets[k]]);
    if (length == 0.0) continue;
    double sum = 0.0;
    for (std::size_t t = 0; t < subdivisions; ++t) sum += powered[k * subdivisions + t];
    out[k] = (length / static_cast<double>(subdivisions)) * sum;
  }
  return out;
}

double dtm_value(const SpatialIndex& index, PointView x, const DtmParams& params) {
  DtmEvaluator eval(index, params);
  return eval.value(x);
}

std::vector<double> dtm_batch(const SpatialIndex& index, const PointCloud& queries, const DtmParams& params,
                              unsigned threads) {
  params.validate();
  std::vector<double> out(queries.size());
  if (queries.empty()) return out;
  if (queries.dim() != index.dim()) throw InvalidInput("query dimension does not match the measure");
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (queries.size() + kChunk - 1) / kChunk;
  parallel_for(chunks, threads, [&](std::size_t c) {
    DtmEvaluator eval(index, params);
    const std::size_t end = std::min(queries.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) out[i] = eval.value(queries[i]);
  });
  return out;
}

double dtm_segment_integral(const SpatialIndex& index, PointView x, PointView y, const DtmParams& params,
                            std::size_t subdivisions) {
  DtmEvaluator eval(index, params);
  return eval.segment_integral(x, y, subdivisions);
}

}  // namespace fdtm
