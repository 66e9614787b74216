#include "fdtm/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

#include "fdtm/error.hpp"
#include "fdtm/random.hpp"

namespace fdtm {

void DtmParams::validate() const {
  if (!(m > 0.0 && m <= 1.0)) throw InvalidInput("m must lie in (0, 1], got " + std::to_string(m));
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidInput("p must be >= 1, got " + std::to_string(p));
  if (!(beta >= 1.0) || !std::isfinite(beta)) throw InvalidInput("beta must be >= 1, got " + std::to_string(beta));
}

WeightedMeasure::WeightedMeasure(PointCloud support, std::vector<double> masses)
    : support_(std::move(support)), masses_(std::move(masses)) {
  if (support_.empty()) throw InvalidInput("measure support is empty");
  if (masses_.size() != support_.size()) throw InvalidInput("mass count differs from point count");
  for (double w : masses_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidInput("masses must be positive and finite");
  }
  for (double c : support_.coords()) {
    if (!std::isfinite(c)) throw InvalidInput("point coordinates must be finite");
  }
  const double total = std::accumulate(masses_.begin(), masses_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) throw InvalidInput("masses must sum to 1, got " + std::to_string(total));
  max_mass_ = *std::max_element(masses_.begin(), masses_.end());
  uniform_ = std::all_of(masses_.begin(), masses_.end(), [&](double w) { return w == masses_.front(); });
}

WeightedMeasure make_empirical(const PointCloud& cloud) {
  if (cloud.empty()) throw InvalidInput("cannot build an empirical measure from an empty cloud");
  const double w = 1.0 / static_cast<double>(cloud.size());
  return WeightedMeasure(cloud, std::vector<double>(cloud.size(), w));
}

PointCloud sample_circle(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidInput("sample size must be positive");
  Rng rng(seed);
  PointCloud cloud(2);
  cloud.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    const double p[2] = {std::cos(theta), std::sin(theta)};
    cloud.push_back(p);
  }
  return cloud;
}

std::size_t ring_shortcut_count(const RingOptions& options) {
  if (!options.shortcut) return 0;
  if (options.shortcut_count) return *options.shortcut_count;
  return static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(options.n))));
}

std::pair<Point, Point> ring_shortcut_segment(const RingOptions& options) {
  return {Point{0.0, -options.inner_radius}, Point{0.0, options.inner_radius}};
}

PointCloud sample_ring(const RingOptions& options) {
  const double r0 = options.inner_radius;
  const double r1 = options.outer_radius;
  if (options.n == 0) throw InvalidInput("sample size must be positive");
  if (!(r0 > 0.0) || !(r1 > r0) || !std::isfinite(r1)) throw InvalidInput("ring radii must satisfy 0 < inner < outer");
  const std::size_t shortcut = ring_shortcut_count(options);
  if (shortcut > options.n) throw InvalidInput("shortcut_count exceeds the sample size");

  // Base sample first, always drawn in full so the shortcut variant shares it.
  Rng rng(options.seed, 0);
  PointCloud cloud(2);
  cloud.reserve(options.n);
  for (std::size_t i = 0; i < options.n; ++i) {
    const double radius = std::sqrt(rng.uniform(r0 * r0, r1 * r1));
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    const double p[2] = {radius * std::cos(theta), radius * std::sin(theta)};
    cloud.push_back(p);
  }
  if (shortcut == 0) return cloud;

  const double area = std::numbers::pi * (r1 * r1 - r0 * r0);
  // Mean nearest-neighbour distance of a planar Poisson sample of this density.
  const double nn_spacing = 0.5 * std::sqrt(area / static_cast<double>(options.n));
  const double step = 2.0 * r0 / static_cast<double>(shortcut);
  const double half_jitter = 0.5 * std::min(nn_spacing, step);

  Rng jitter(options.seed, 1);
  for (std::size_t j = 0; j < shortcut; ++j) {
    auto p = cloud.mutable_point(options.n - shortcut + j);
    p[0] = jitter.uniform(-half_jitter, half_jitter);
    p[1] = -r0 + (static_cast<double>(j) + 0.5) * step;
  }
  return cloud;
}

std::pair<WeightedMeasure, WeightedMeasure> lecam_pair(const LeCamOptions& o) {
  if (!(o.b >= 1.0)) throw InvalidInput("b must be >= 1");
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  if (!(o.r > 0.0)) throw InvalidInput("r must be positive");
  if (!(o.epsilon > 0.0 && o.epsilon < std::pow(1.0 - o.alpha, 1.0 / o.b)))
    throw InvalidInput("epsilon must lie in (0, (1 - alpha)^(1/b))");
  if (!(o.m > 0.0 && o.m <= 1.0)) throw InvalidInput("m must lie in (0, 1]");
  if (o.atoms_per_density == 0) throw InvalidInput("atoms_per_density must be positive");

  const auto atoms = static_cast<double>(o.atoms_per_density);
  const double moved = o.m * std::pow(o.epsilon, o.b);

  PointCloud mu_pts(2);
  PointCloud nu_pts(2);
  std::vector<double> mu_w;
  std::vector<double> nu_w;
  auto add = [](PointCloud& pts, std::vector<double>& w, double y, double mass) {
    const double p[2] = {0.0, y};
    pts.push_back(p);
    w.push_back(mass);
  };

  add(mu_pts, mu_w, -o.r, o.m * o.alpha);
  add(mu_pts, mu_w, o.r, o.m * (1.0 - o.alpha));
  add(nu_pts, nu_w, -o.r, o.m * o.alpha);
  add(nu_pts, nu_w, o.r, o.m * (1.0 - o.alpha) - moved);

  if (o.m < 1.0) {
    for (std::size_t j = 0; j < o.atoms_per_density; ++j) {
      const double y = 3.0 * o.r + (static_cast<double>(j) + 0.5) * o.r / atoms;
      add(mu_pts, mu_w, y, (1.0 - o.m) / atoms);
      add(nu_pts, nu_w, y, (1.0 - o.m) / atoms);
    }
  }
  // Quantile midpoints of lambda: F(s) = (s / eps)^b on [0, eps].
  for (std::size_t j = 0; j < o.atoms_per_density; ++j) {
    const double s = o.epsilon * std::pow((static_cast<double>(j) + 0.5) / atoms, 1.0 / o.b);
    add(nu_pts, nu_w, o.r - o.epsilon + s, moved / atoms);
  }
  return {WeightedMeasure(std::move(mu_pts), std::move(mu_w)), WeightedMeasure(std::move(nu_pts), std::move(nu_w))};
}

PointCloud scale_cloud(const PointCloud& cloud, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidInput("scale factor must be positive");
  std::vector<double> coords(cloud.coords().begin(), cloud.coords().end());
  for (double& c : coords) c *= s;
  return PointCloud(cloud.dim(), std::move(coords));
}

WeightedMeasure scale_measure(const WeightedMeasure& mu, double s) {
  return WeightedMeasure(scale_cloud(mu.support(), s), std::vector<double>(mu.masses().begin(), mu.masses().end()));
}

double mass_difference_l1(const WeightedMeasure& mu, const WeightedMeasure& nu) {
  std::map<std::vector<double>, double> diff;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto p = mu.support()[i];
    diff[{p.begin(), p.end()}] += mu.masses()[i];
  }
  for (std::size_t i = 0; i < nu.size(); ++i) {
    const auto p = nu.support()[i];
    diff[{p.begin(), p.end()}] -= nu.masses()[i];
  }
  double total = 0.0;
  for (const auto& [_, d] : diff) total += std::abs(d);
  return total;
}

}  // namespace fdtm
