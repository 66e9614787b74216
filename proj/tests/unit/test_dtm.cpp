#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fdtm/dtm.hpp"
#include "fdtm/error.hpp"
#include "fdtm/measures.hpp"
#include "fdtm/oracles.hpp"
#include "fdtm/random.hpp"
#include "fdtm/spatial_index.hpp"

using namespace fdtm;

namespace {

WeightedMeasure random_measure(Rng& rng, std::size_t n, std::size_t dim) {
  PointCloud pts(dim);
  Point p(dim);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& x : p) x = rng.normal();
    pts.push_back(p);
    w[i] = 0.1 + rng.uniform();
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  // Absorb the rounding residue so the masses sum to one.
  w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
  return WeightedMeasure(std::move(pts), std::move(w));
}

}  // namespace

TEST_CASE("single atom: the DTM is the distance to it") {
  const WeightedMeasure mu(PointCloud(2, {1.0, 2.0}), {1.0});
  const SpatialIndex index(mu);
  for (const double m : {0.05, 0.5, 1.0}) {
    for (const double p : {1.0, 2.0, 3.5}) {
      const Point x{4.0, 6.0};
      CHECK(dtm_value(index, x, {m, p, 1.0}) == doctest::Approx(5.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("two atoms on the line") {
  const WeightedMeasure mu(PointCloud(1, {0.0, 1.0}), {0.5, 0.5});
  const SpatialIndex index(mu);
  const Point x{0.0};
  CHECK(dtm_value(index, x, {1.0, 1.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("fractional last atom for uniform masses") {
  Rng rng(21);
  PointCloud pts(2);
  for (int i = 0; i < 10; ++i) {
    const double p[2] = {rng.normal(), rng.normal()};
    pts.push_back(p);
  }
  const auto mu = make_empirical(pts);
  const SpatialIndex index(mu);
  for (int trial = 0; trial < 20; ++trial) {
    const Point x{2 * rng.normal(), 2 * rng.normal()};
    std::vector<double> r;
    for (std::size_t i = 0; i < pts.size(); ++i) r.push_back(distance(x, pts[i]));
    std::sort(r.begin(), r.end());
    const double m = 0.25;
    const double n = 10;
    const double expected = std::sqrt((1 / m) * ((1 / n) * (r[0] * r[0] + r[1] * r[1]) + ((m * n - 2) / n) * r[2] * r[2]));
    CHECK(dtm_value(index, x, {m, 2.0, 1.0}) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(oracles::dtm_piecewise_quadrature(mu, x, {m, 2.0, 1.0}) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("m = 1/n gives the nearest-neighbour distance") {
  Rng rng(4);
  const auto mu = make_empirical(sample_circle(300, 2));
  const SpatialIndex index(mu);
  for (int trial = 0; trial < 50; ++trial) {
    const Point x{rng.normal(), rng.normal()};
    const double nn = std::sqrt(index.knn_linear(x, 1)[0].squared_distance);
    CHECK(dtm_value(index, x, {1.0 / 300.0, 2.0, 1.0}) == doctest::Approx(nn).epsilon(1e-12));
  }
}

TEST_CASE("matches the quadrature oracle on weighted measures") {
  Rng rng(99);
  for (int t = 0; t < 60; ++t) {
    const auto mu = random_measure(rng, 1 + rng.below(20), 1 + rng.below(3));
    const SpatialIndex index(mu);
    const DtmParams params{0.02 + 0.98 * rng.uniform(), 1.0 + 3.0 * rng.uniform(), 1.0};
    Point x(mu.dim());
    for (double& c : x) c = 2 * rng.normal();
    const double got = dtm_value(index, x, params);
    const double want = oracles::dtm_piecewise_quadrature(mu, x, params);
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("large weighted measures use the tree and still agree with the oracle") {
  Rng rng(5);
  const auto mu = random_measure(rng, 800, 2);
  const SpatialIndex index(mu);
  REQUIRE(index.uses_tree());
  DtmEvaluator eval(index, {0.3, 2.0, 1.0});
  for (int t = 0; t < 30; ++t) {
    const Point x{rng.normal(), rng.normal()};
    CHECK(eval.value(x) == doctest::Approx(oracles::dtm_piecewise_quadrature(mu, x, {0.3, 2.0, 1.0})).epsilon(1e-9));
  }
}

TEST_CASE("value does not depend on the call history") {
  const auto mu = make_empirical(sample_circle(2000, 8));
  const SpatialIndex index(mu);
  const DtmParams params{0.1, 2.0, 2.0};
  Rng rng(3);
  std::vector<Point> queries;
  for (int i = 0; i < 300; ++i) {
    // Clustered walk so the evaluator's radius hint is exercised.
    const double a = 0.01 * i;
    queries.push_back({0.8 * std::cos(a) + 0.01 * rng.normal(), 0.8 * std::sin(a)});
  }
  DtmEvaluator walk(index, params);
  std::vector<double> forward;
  for (const auto& q : queries) forward.push_back(walk.value(q));
  DtmEvaluator back(index, params);
  for (std::size_t i = queries.size(); i-- > 0;) CHECK(back.value(queries[i]) == forward[i]);
  for (std::size_t i = 0; i < queries.size(); ++i) CHECK(dtm_value(index, queries[i], params) == forward[i]);
}

TEST_CASE("value_bounded falls back when the bound is too small") {
  const auto mu = make_empirical(sample_circle(500, 1));
  const SpatialIndex index(mu);
  const DtmParams params{0.2, 2.0, 1.0};
  DtmEvaluator eval(index, params);
  const Point x{0.1, 0.2};
  const double exact = dtm_value(index, x, params);
  CHECK(eval.value_bounded(x, 1e-6) == exact);
  CHECK(eval.value_bounded(x, 10.0) == exact);
}

TEST_CASE("dtm_batch") {
  const auto mu = make_empirical(sample_circle(400, 6));
  const SpatialIndex index(mu);
  const DtmParams params{0.1, 2.0, 2.0};
  CHECK(dtm_batch(index, PointCloud(2), params).empty());

  Rng rng(1);
  PointCloud queries(2);
  for (int i = 0; i < 1000; ++i) {
    const double p[2] = {rng.normal(), rng.normal()};
    queries.push_back(p);
  }
  const auto one = dtm_batch(index, queries, params, 1);
  const auto four = dtm_batch(index, queries, params, 4);
  REQUIRE(one.size() == queries.size());
  CHECK(one == four);
  for (std::size_t i = 0; i < queries.size(); ++i) CHECK(one[i] == dtm_value(index, queries[i], params));
}

TEST_CASE("segment integral") {
  const WeightedMeasure origin(PointCloud(2, {0.0, 0.0}), {1.0});
  const SpatialIndex index(origin);
  const Point x{1.0, 0.0};
  const Point y{-1.0, 0.0};
  CHECK(dtm_segment_integral(index, x, y, {0.5, 3.0, 1.0}, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dtm_segment_integral(index, x, x, {0.5, 3.0, 1.0}, 2) == 0.0);

  // Unit segment through the atom: integral of |t - t0|^beta.
  const Point a{-0.3, 0.0};
  const Point b{0.7, 0.0};
  for (const double beta : {1.0, 2.0, 3.0}) {
    const double exact = (std::pow(0.3, beta + 1) + std::pow(0.7, beta + 1)) / (beta + 1);
    CHECK(dtm_segment_integral(index, a, b, {1.0, 2.0, beta}, 2000) == doctest::Approx(exact).epsilon(1e-4));
  }
  CHECK_THROWS_AS(dtm_segment_integral(index, a, b, {1.0, 2.0, 1.0}, 0), InvalidInput);
}

TEST_CASE("segment integral is exactly symmetric") {
  const auto mu = make_empirical(sample_circle(300, 2));
  const SpatialIndex index(mu);
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const Point x{rng.normal(), rng.normal()};
    const Point y{rng.normal(), rng.normal()};
    CHECK(dtm_segment_integral(index, x, y, {0.1, 2.0, 2.0}, 9) == dtm_segment_integral(index, y, x, {0.1, 2.0, 2.0}, 9));
  }
}

TEST_CASE("segment fan equals individual segment integrals") {
  const auto cloud = sample_circle(600, 5);
  const auto mu = make_empirical(cloud);
  const SpatialIndex index(mu);
  const DtmParams params{0.1, 2.0, 2.0};
  std::vector<std::uint32_t> targets;
  for (std::uint32_t j = 0; j < cloud.size(); j += 3) targets.push_back(j);
  for (const std::size_t origin : {0UL, 17UL, 599UL}) {
    DtmEvaluator fan_eval(index, params);
    const auto fan = fan_eval.segment_fan(cloud[origin], cloud, targets, 10);
    DtmEvaluator single(index, params);
    for (std::size_t k = 0; k < targets.size(); ++k)
      CHECK(fan[k] == single.segment_integral(cloud[origin], cloud[targets[k]], 10));
  }
}

TEST_CASE("dimension mismatch") {
  const SpatialIndex index(sample_circle(10, 1));
  const Point x{0.0, 0.0, 0.0};
  CHECK_THROWS_AS(dtm_value(index, x, {}), InvalidInput);
  CHECK_THROWS_AS(dtm_value(index, Point{0.0, 0.0}, DtmParams{2.0, 2.0, 2.0}), InvalidInput);
}
