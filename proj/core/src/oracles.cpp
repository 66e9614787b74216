#include "fdtm/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "fdtm/dtm.hpp"
#include "fdtm/error.hpp"

namespace fdtm::oracles {

OracleReport compare(double computed, double reference) noexcept {
  OracleReport r;
  r.computed = computed;
  r.reference = reference;
  r.abs_err = std::abs(computed - reference);
  r.rel_err = r.abs_err / std::max(std::abs(reference), 1e-300);
  return r;
}

double wasserstein_bruteforce(const WeightedMeasure& mu, const WeightedMeasure& nu, double p) {
  if (!(p >= 1.0)) throw InvalidInput("Wasserstein order p must be >= 1");
  if (!mu.uniform() || !nu.uniform() || mu.size() != nu.size())
    throw Unsupported("brute-force Wasserstein needs two uniform measures of equal size");
  if (mu.size() > 7) throw Unsupported("brute-force Wasserstein is limited to 7 atoms");
  if (mu.dim() != nu.dim()) throw InvalidInput("measures live in different dimensions");

  const std::size_t n = mu.size();
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = std::pow(distance(mu.support()[i], nu.support()[j]), p);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost[i * n + perm[i]];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::pow(best / static_cast<double>(n), 1.0 / p);
}

double exhaustive_shortest(const MetricGraph& graph, std::size_t s, std::size_t t) {
  const std::size_t n = graph.size();
  if (n > 8) throw Unsupported("exhaustive path enumeration is limited to 8 vertices");
  if (s >= n || t >= n) throw InvalidInput("vertex out of range");
  if (s == t) return 0.0;

  // Dense adjacency so the enumeration does not share code with Dijkstra.
  std::vector<double> adj(n * n, std::numeric_limits<double>::infinity());
  for (const Edge& e : graph.edges()) {
    adj[e.i * n + e.j] = e.weight;
    adj[e.j * n + e.i] = e.weight;
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> on_path(n, 0);
  auto dfs = [&](auto&& self, std::size_t u, double length) -> void {
    if (u == t) {
      best = std::min(best, length);
      return;
    }
    on_path[u] = 1;
    for (std::size_t v = 0; v < n; ++v) {
      const double w = adj[u * n + v];
      if (!on_path[v] && std::isfinite(w)) self(self, v, length + w);
    }
    on_path[u] = 0;
  };
  dfs(dfs, s, 0.0);
  return best;
}

double pseudo_dtm(const WeightedMeasure& measure, PointView x, double u) {
  // inf{r > 0 : mu(B(x, r)) > u} over open balls: the smallest atom radius r
  // whose closed ball already carries more than u.
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < measure.size(); ++i) {
    const double r = distance(x, measure.support()[i]);
    if (r >= best) continue;
    double mass = 0.0;
    for (std::size_t j = 0; j < measure.size(); ++j)
      if (distance(x, measure.support()[j]) <= r) mass += measure.masses()[j];
    if (mass > u) best = r;
  }
  return best;
}

double dtm_piecewise_quadrature(const WeightedMeasure& measure, PointView x, const DtmParams& params) {
  params.validate();
  if (x.size() != measure.dim()) throw InvalidInput("query dimension does not match the measure");
  // u -> delta_u is a step function jumping only at cumulative masses of
  // distance-sorted atoms; integrate it cell by cell with one sample per cell.
  std::vector<std::pair<double, double>> atoms;
  for (std::size_t i = 0; i < measure.size(); ++i)
    atoms.emplace_back(distance(x, measure.support()[i]), measure.masses()[i]);
  std::sort(atoms.begin(), atoms.end());
  std::vector<double> cuts{0.0};
  double cumulative = 0.0;
  for (const auto& [r, w] : atoms) {
    cumulative += w;
    if (cumulative < params.m) cuts.push_back(cumulative);
  }
  cuts.push_back(params.m);

  double integral = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double width = cuts[c + 1] - cuts[c];
    if (width <= 0.0) continue;
    const double u = 0.5 * (cuts[c] + cuts[c + 1]);
    integral += width * std::pow(pseudo_dtm(measure, x, u), params.p);
  }
  return std::pow(integral / params.m, 1.0 / params.p);
}

namespace {

double power(double x, double e) noexcept {
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  if (e == 0.5) return std::sqrt(x);
  return std::pow(x, e);
}

}  // namespace

double circle_pseudo_dtm(double rho, double u) noexcept {
  return std::sqrt(std::max(0.0, 1.0 + rho * rho - 2.0 * rho * std::cos(std::numbers::pi * u)));
}

double circle_dtm(double rho, const DtmParams& params, std::size_t quadrature_points) {
  const auto q = static_cast<double>(quadrature_points);
  double acc = 0.0;
  for (std::size_t i = 0; i < quadrature_points; ++i) {
    const double u = params.m * (static_cast<double>(i) + 0.5) / q;
    acc += power(circle_pseudo_dtm(rho, u), params.p);
  }
  return power(acc / q, 1.0 / params.p);
}

double circle_chord_fdtm(double angle, const DtmParams& params, std::size_t quadrature_points) {
  const double half = 0.5 * angle;
  const double length = 2.0 * std::sin(half);
  const double apothem = std::cos(half);
  const auto q = static_cast<double>(quadrature_points);
  // Nodes are mirror-symmetric about the chord midpoint.
  double acc = 0.0;
  for (std::size_t i = 0; 2 * i + 1 < quadrature_points; ++i) {
    const double s = ((static_cast<double>(i) + 0.5) / q - 0.5) * length;
    const double rho = std::sqrt(apothem * apothem + s * s);
    acc += power(circle_dtm(rho, params, quadrature_points), params.beta);
  }
  acc *= 2.0;
  if (quadrature_points % 2 == 1) acc += power(circle_dtm(apothem, params, quadrature_points), params.beta);
  return length * acc / q;
}

CircleFdtm circle_fdtm_analytic(double angle, const DtmParams& params, std::size_t quadrature_points) {
  params.validate();
  if (quadrature_points < 100) throw InvalidInput("circle oracle needs at least 100 quadrature points");
  if (!std::isfinite(angle)) throw InvalidInput("angle must be finite");
  // Reduce to [0, pi] by symmetry.
  angle = std::fmod(std::abs(angle), 2.0 * std::numbers::pi);
  if (angle > std::numbers::pi) angle = 2.0 * std::numbers::pi - angle;

  CircleFdtm best;
  if (angle == 0.0) return best;
  constexpr int kMaxChords = 64;
  best.value = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kMaxChords; ++k) {
    const double v = k * circle_chord_fdtm(angle / k, params, quadrature_points);
    if (v < best.value) {
      best.value = v;
      best.chords = k;
    }
  }
  best.cap_reached = best.chords == kMaxChords;
  return best;
}

double high_resolution_edge_weight(const WeightedMeasure& measure, PointView x, PointView y, const DtmParams& params) {
  const SpatialIndex index(measure);
  return dtm_segment_integral(index, x, y, params, 10'000);
}

}  // namespace fdtm::oracles
