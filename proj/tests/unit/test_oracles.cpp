#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fdtm/error.hpp"
#include "fdtm/graph.hpp"
#include "fdtm/measures.hpp"
#include "fdtm/oracles.hpp"
#include "fdtm/random.hpp"

using namespace fdtm;
using std::numbers::pi;

namespace {

WeightedMeasure uniform_line(std::vector<double> xs) {
  const double w = 1.0 / static_cast<double>(xs.size());
  const std::size_t n = xs.size();
  return WeightedMeasure(PointCloud(1, std::move(xs)), std::vector<double>(n, w));
}

// Closed form of circle_dtm for p = 2.
double circle_dtm_p2(double rho, double m) { return std::sqrt(1 + rho * rho - 2 * rho * std::sin(pi * m) / (pi * m)); }

// k * FDTM of a chord, Simpson's rule on the closed form.
double chords_p2(int k, double angle, double m, double beta) {
  const double half = angle / (2 * k);
  const double length = 2 * std::sin(half);
  const double a = std::cos(half);
  const int n = 20000;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = (static_cast<double>(i) / n - 0.5) * length;
    const double f = std::pow(circle_dtm_p2(std::hypot(a, s), m), beta);
    acc += (i == 0 || i == n ? 1 : (i % 2 ? 4 : 2)) * f;
  }
  return k * acc * (length / n) / 3.0;
}

}  // namespace

TEST_CASE("compare") {
  const auto r = oracles::compare(1.5, 2.0);
  CHECK(r.abs_err == 0.5);
  CHECK(r.rel_err == 0.25);
  CHECK(oracles::compare(1e-310, 0.0).rel_err == doctest::Approx(1e-10));
}

TEST_CASE("brute-force Wasserstein") {
  const auto mu = uniform_line({0.0, 1.0});
  CHECK(oracles::wasserstein_bruteforce(mu, mu, 2.0) == 0.0);
  CHECK(oracles::wasserstein_bruteforce(mu, uniform_line({0.1, 0.9}), 2.0) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(oracles::wasserstein_bruteforce(mu, uniform_line({1.0, 0.0}), 1.0) == 0.0);

  const WeightedMeasure a(PointCloud(2, {0.0, 0.0}), {1.0});
  const WeightedMeasure b(PointCloud(2, {3.0, 4.0}), {1.0});
  CHECK(oracles::wasserstein_bruteforce(a, b, 1.5) == doctest::Approx(5.0).epsilon(1e-14));

  CHECK_THROWS((void)oracles::wasserstein_bruteforce(mu, uniform_line({0.0, 1.0, 2.0}), 2.0));
  CHECK_THROWS((void)oracles::wasserstein_bruteforce(uniform_line({0, 1, 2, 3, 4, 5, 6, 7}),
                                                     uniform_line({0, 1, 2, 3, 4, 5, 6, 7}), 2.0));
}

TEST_CASE("brute-force Wasserstein is a metric") {
  Rng rng(77);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + rng.below(6);
    auto make = [&] {
      std::vector<double> xs(2 * n);
      for (double& x : xs) x = rng.normal();
      return WeightedMeasure(PointCloud(2, xs), std::vector<double>(n, 1.0 / static_cast<double>(n)));
    };
    const auto a = make();
    const auto b = make();
    const auto c = make();
    const double ab = oracles::wasserstein_bruteforce(a, b, 2.0);
    CHECK(ab == doctest::Approx(oracles::wasserstein_bruteforce(b, a, 2.0)).epsilon(1e-12));
    CHECK(ab <= oracles::wasserstein_bruteforce(a, c, 2.0) + oracles::wasserstein_bruteforce(c, b, 2.0) + 1e-9);
  }
}

TEST_CASE("exhaustive shortest path") {
  const PointCloud pts(1, {0.0, 1.0, 2.0});
  const MetricGraph g(pts, {Edge{0, 1, 2.5}}, Complete{}, SampleFermat{}, DtmParams{});
  CHECK(oracles::exhaustive_shortest(g, 1, 1) == 0.0);
  CHECK(oracles::exhaustive_shortest(g, 0, 1) == 2.5);
  CHECK(std::isinf(oracles::exhaustive_shortest(g, 0, 2)));
}

TEST_CASE("pseudo-DTM from its definition") {
  const auto mu = uniform_line({0.0, 1.0, 3.0, 4.0});
  const Point x{0.0};
  CHECK(oracles::pseudo_dtm(mu, x, 0.0) == 0.0);
  CHECK(oracles::pseudo_dtm(mu, x, 0.2) == 0.0);
  CHECK(oracles::pseudo_dtm(mu, x, 0.25) == 1.0);
  CHECK(oracles::pseudo_dtm(mu, x, 0.6) == 3.0);
  CHECK(oracles::pseudo_dtm(mu, x, 0.99) == 4.0);
  // Piecewise-constant integral: atoms at 0, 1, 3 over [0, 0.6], p = 1.
  CHECK(oracles::dtm_piecewise_quadrature(mu, x, {0.6, 1.0, 1.0}) ==
        doctest::Approx((0.25 * 0 + 0.25 * 1 + 0.1 * 3) / 0.6).epsilon(1e-15));
}

TEST_CASE("circle pseudo-DTM") {
  CHECK(oracles::circle_pseudo_dtm(1.0, 0.0) == 0.0);
  CHECK(oracles::circle_pseudo_dtm(1.0, 1e-9) < 1e-8);
  for (const double m : {0.05, 0.1, 0.5})
    CHECK(oracles::circle_pseudo_dtm(1.0, m) == doctest::Approx(2 * std::sin(pi * m / 2)).epsilon(1e-14));
  CHECK(oracles::circle_pseudo_dtm(0.0, 0.3) == 1.0);
}

TEST_CASE("circle DTM matches the closed form for p = 2") {
  for (const double rho : {0.0, 0.3, 0.8, 1.0})
    for (const double m : {0.05, 0.1, 0.5, 1.0})
      CHECK(oracles::circle_dtm(rho, {m, 2.0, 2.0}, 2000) == doctest::Approx(circle_dtm_p2(rho, m)).epsilon(1e-7));
}

TEST_CASE("equal-chord circle distance") {
  const DtmParams params{0.1, 2.0, 2.0};
  const auto r = oracles::circle_fdtm_analytic(pi, params, 2000);
  CHECK(r.chords == 6);
  CHECK_FALSE(r.cap_reached);
  CHECK(r.value == doctest::Approx(0.1012866467).epsilon(1e-9));
  CHECK(r.value == doctest::Approx(chords_p2(6, pi, 0.1, 2.0)).epsilon(1e-6));
  for (int k = 1; k <= 10; ++k) CHECK(r.value <= chords_p2(k, pi, 0.1, 2.0) * (1 + 1e-6));

  CHECK(r.value <= oracles::circle_chord_fdtm(pi, params, 2000));
  CHECK(oracles::circle_fdtm_analytic(0.0, params, 2000).value == 0.0);
  CHECK(oracles::circle_fdtm_analytic(-pi, params, 500).value == oracles::circle_fdtm_analytic(pi, params, 500).value);
  CHECK_THROWS_AS((void)oracles::circle_fdtm_analytic(pi, params, 10), InvalidInput);
}

TEST_CASE("high-resolution edge weight") {
  const WeightedMeasure atom(PointCloud(2, {0.0, 0.0}), {1.0});
  const Point a{-0.25, 0.0};
  const Point b{0.75, 0.0};
  for (const double beta : {1.0, 2.0}) {
    const double exact = (std::pow(0.25, beta + 1) + std::pow(0.75, beta + 1)) / (beta + 1);
    CHECK(std::abs(oracles::high_resolution_edge_weight(atom, a, b, {1.0, 1.0, beta}) - exact) <= 1e-4);
  }
  CHECK(oracles::high_resolution_edge_weight(atom, a, a, {}) == 0.0);
}

TEST_CASE("production weights agree with the high-resolution integral on circle clouds") {
  const auto cloud = sample_circle(256, 9);
  const auto mu = make_empirical(cloud);
  const DtmParams params{0.1, 2.0, 2.0};
  const auto g = build_graph(mu, KNearest{4}, SubdividedDtm{default_log_parameter(256)}, params);
  for (std::size_t e = 0; e < g.edge_count(); e += 7) {
    const auto& edge = g.edges()[e];
    const double ref = oracles::high_resolution_edge_weight(mu, cloud[edge.i], cloud[edge.j], params);
    CHECK(std::abs(edge.weight - ref) <= 0.05 * ref);
  }
}
