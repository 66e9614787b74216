#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fdtm/measures.hpp"
#include "fdtm/spatial_index.hpp"

namespace fdtm {

/// Exact distance-to-measure of the indexed discrete measure.
///
/// With atoms sorted by distance r_1 <= r_2 <= ... and cumulative masses W_j,
///   d^p = (1/m) * sum_j c_j r_j^p,   c_j = clamp(min(W_j, m) - W_{j-1}, 0, w_j).
/// For uniform masses 1/n this is the k-nearest-neighbour formula with
/// k = floor(mn) plus the fractional (mn - k)/n share of the (k+1)-th neighbour.
double dtm_value(const SpatialIndex& index, PointView x, const DtmParams& params);

/// dtm_value for every query, in order. Output is bit-identical to sequential
/// dtm_value calls for any thread count.
std::vector<double> dtm_batch(const SpatialIndex& index, const PointCloud& queries, const DtmParams& params,
                              unsigned threads = 1);

/// Midpoint-rule FDTM length of the segment [x, y]:
///   (|x - y| / r) * sum_{t=1..r} dtm(x + ((t - 1/2)/r)(y - x))^beta.
/// Symmetric in (x, y) bit for bit.
double dtm_segment_integral(const SpatialIndex& index, PointView x, PointView y, const DtmParams& params,
                            std::size_t subdivisions);

/// Reusable evaluator holding scratch buffers; one per thread.
///
/// Consecutive evaluations at nearby points reuse the previous support radius
/// as a search bound, which is exact because the radius enclosing mass m is
/// 1-Lipschitz in the query point. Results never depend on the call history.
class DtmEvaluator {
 public:
  DtmEvaluator(const SpatialIndex& index, const DtmParams& params);

  [[nodiscard]] const SpatialIndex& index() const noexcept { return *index_; }
  [[nodiscard]] const DtmParams& params() const noexcept { return params_; }

  /// Same value as dtm_value.
  double value(PointView x);
  /// dtm(x)^beta.
  double powered(PointView x) { return raise_beta(value(x)); }
  /// Evaluates with a search radius known to enclose mass m around x; falls
  /// back to a plain k-NN query when the bound turns out too small.
  double value_bounded(PointView x, double radius_bound);
  /// Radius of the farthest atom used by the last evaluation.
  [[nodiscard]] double support_radius() const noexcept { return last_radius_; }

  double segment_integral(PointView x, PointView y, std::size_t subdivisions);
  /// segment_integral(origin, points[t], subdivisions) for every t in targets,
  /// bit for bit. Fastest when targets are listed in spatial order.
  std::vector<double> segment_fan(PointView origin, const PointCloud& points, std::span<const std::uint32_t> targets,
                                  std::size_t subdivisions);

  [[nodiscard]] double raise_beta(double d) const noexcept;

 private:
  double value_unbounded(PointView x);
  double finish_sorted(std::size_t count);
  double value_bracketed(PointView x, double radius_floor, double radius_bound);
  double uniform_from_candidates(double known_below);

  const SpatialIndex* index_;
  DtmParams params_;
  std::size_t uniform_atoms_ = 0;  // atoms carrying mass when masses are uniform
  std::size_t min_atoms_ = 1;      // lower bound on that count otherwise
  double last_radius_ = 0.0;
  std::vector<Neighbor> scratch_;
  std::vector<double> distances_;
  std::vector<double> selection_;
  std::vector<double> midpoint_;
  Point last_query_;
};

}  // namespace fdtm
