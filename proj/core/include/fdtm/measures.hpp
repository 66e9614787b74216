#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fdtm/point_cloud.hpp"

namespace fdtm {

/// Mass fraction m in (0,1], Hoelder exponent p >= 1 and path exponent beta >= 1.
struct DtmParams {
  double m = 0.1;
  double p = 2.0;
  double beta = 2.0;

  /// Throws InvalidInput when a field is out of range.
  void validate() const;

  friend bool operator==(const DtmParams&, const DtmParams&) = default;
};

/// Finite probability measure: positive masses attached to points.
///
/// Masses must sum to one within 1e-12 (relative); duplicate points are kept
/// as separate atoms.
class WeightedMeasure {
 public:
  WeightedMeasure(PointCloud support, std::vector<double> masses);

  [[nodiscard]] const PointCloud& support() const noexcept { return support_; }
  [[nodiscard]] std::span<const double> masses() const noexcept { return masses_; }
  [[nodiscard]] std::size_t size() const noexcept { return masses_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return support_.dim(); }
  /// True when every atom carries exactly the same mass.
  [[nodiscard]] bool uniform() const noexcept { return uniform_; }
  [[nodiscard]] double max_mass() const noexcept { return max_mass_; }

 private:
  PointCloud support_;
  std::vector<double> masses_;
  bool uniform_ = false;
  double max_mass_ = 0.0;
};

WeightedMeasure make_empirical(const PointCloud& cloud);

/// n i.i.d. points of the uniform distribution on the unit circle.
PointCloud sample_circle(std::size_t n, std::uint64_t seed);

struct RingOptions {
  std::size_t n = 1024;
  double inner_radius = 0.7;
  double outer_radius = 1.0;
  bool shortcut = false;
  /// Number of points moved onto the shortcut; defaults to round(sqrt(n)).
  std::optional<std::size_t> shortcut_count;
  std::uint64_t seed = 0;
};

/// Uniform sample of an annulus. With `shortcut`, the highest-index points are
/// moved onto the vertical diameter inside the hole, evenly spaced with a
/// horizontal jitter of the order of the ring's nearest-neighbour spacing.
PointCloud sample_ring(const RingOptions& options);

/// Number of shortcut points sample_ring uses for these options.
std::size_t ring_shortcut_count(const RingOptions& options);

/// Segment {(0, y) : |y| <= inner_radius} carrying the ring shortcut.
std::pair<Point, Point> ring_shortcut_segment(const RingOptions& options);

struct LeCamOptions {
  double b = 1.0;
  double alpha = 0.5;
  double r = 0.25;
  double epsilon = 0.05;
  double m = 0.5;
  std::size_t atoms_per_density = 64;
};

/// Discretised pair of planar measures differing by a small mass moved from
/// the atom at r*e2 onto a thin density below it.
///
///   mu = m*alpha*delta(-r e2) + m*(1-alpha)*delta(r e2) + (1-m)*rho
///   nu = mu - m*eps^b*delta(r e2) + m*lambda
///
/// rho (uniform on [3r e2, 4r e2]) becomes equally spaced equal-mass atoms and
/// lambda (density b*s^(b-1) on [(r-eps) e2, r e2], s the distance to the
/// lower end) becomes equal-mass atoms at its quantile midpoints.
std::pair<WeightedMeasure, WeightedMeasure> lecam_pair(const LeCamOptions& options);

WeightedMeasure scale_measure(const WeightedMeasure& mu, double s);
PointCloud scale_cloud(const PointCloud& cloud, double s);

/// Sum over the union of supports of |mu({z}) - nu({z})|, atoms matched by
/// exact coordinates.
double mass_difference_l1(const WeightedMeasure& mu, const WeightedMeasure& nu);

}  // namespace fdtm
