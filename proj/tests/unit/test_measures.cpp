#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "fdtm/dtm.hpp"
#include "fdtm/error.hpp"
#include "fdtm/measures.hpp"
#include "fdtm/spatial_index.hpp"

using namespace fdtm;

namespace {

double total_mass(const WeightedMeasure& mu) {
  const auto w = mu.masses();
  return std::accumulate(w.begin(), w.end(), 0.0);
}

PointCloud cloud2(std::initializer_list<std::pair<double, double>> pts) {
  PointCloud c(2);
  for (auto [x, y] : pts) {
    const double p[2] = {x, y};
    c.push_back(p);
  }
  return c;
}

}  // namespace

TEST_CASE("empirical measures carry uniform masses") {
  const auto four = make_empirical(cloud2({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
  for (double w : four.masses()) CHECK(w == 0.25);
  CHECK(four.uniform());

  const auto one = make_empirical(cloud2({{3, 4}}));
  CHECK(one.masses()[0] == 1.0);
}

TEST_CASE("duplicate points behave like a merged atom") {
  const auto dup = make_empirical(cloud2({{0, 0}, {1, 0}, {1, 0}}));
  for (double w : dup.masses()) CHECK(w == doctest::Approx(1.0 / 3.0));
  const WeightedMeasure merged(cloud2({{0, 0}, {1, 0}}), {1.0 / 3.0, 2.0 / 3.0});

  const SpatialIndex a(dup);
  const SpatialIndex b(merged);
  for (const double m : {0.1, 0.3, 0.5, 0.9, 1.0}) {
    const DtmParams params{m, 2.0, 1.0};
    for (const auto& q : std::vector<Point>{{0.2, 0.3}, {1.5, -1.0}, {0.5, 0.0}}) {
      CHECK(dtm_value(a, q, params) == doctest::Approx(dtm_value(b, q, params)).epsilon(1e-12));
    }
  }
}

TEST_CASE("measure construction rejects bad input") {
  CHECK_THROWS_AS(WeightedMeasure(PointCloud(2), {}), InvalidInput);
  CHECK_THROWS_AS(WeightedMeasure(cloud2({{0, 0}, {1, 1}}), {0.5}), InvalidInput);
  CHECK_THROWS_AS(WeightedMeasure(cloud2({{0, 0}, {1, 1}}), {0.5, 0.6}), InvalidInput);
  CHECK_THROWS_AS(WeightedMeasure(cloud2({{0, 0}, {1, 1}}), {1.5, -0.5}), InvalidInput);
  CHECK_THROWS_AS(WeightedMeasure(cloud2({{0, NAN}}), {1.0}), InvalidInput);
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW((DtmParams{1.0, 1.0, 1.0}.validate()));
  CHECK_THROWS_AS((DtmParams{0.0, 2.0, 2.0}.validate()), InvalidInput);
  CHECK_THROWS_AS((DtmParams{1.5, 2.0, 2.0}.validate()), InvalidInput);
  CHECK_THROWS_AS((DtmParams{0.1, 0.5, 2.0}.validate()), InvalidInput);
  CHECK_THROWS_AS((DtmParams{0.1, 2.0, 0.9}.validate()), InvalidInput);
}

TEST_CASE("circle samples lie on the unit circle and are seed-determined") {
  const auto c = sample_circle(1000, 3);
  CHECK(c.size() == 1000);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(norm(c[i]) - 1.0) <= 1e-12);
  CHECK(sample_circle(1000, 3) == c);
  CHECK_FALSE(sample_circle(1000, 4) == c);
}

TEST_CASE("circle sample angles pass a Kolmogorov-Smirnov test") {
  const auto c = sample_circle(10000, 17);
  std::vector<double> u(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    double a = std::atan2(c[i][1], c[i][0]);
    if (a < 0) a += 2 * std::numbers::pi;
    u[i] = a / (2 * std::numbers::pi);
  }
  std::sort(u.begin(), u.end());
  double ks = 0.0;
  const auto n = static_cast<double>(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - u[i]));
    ks = std::max(ks, std::abs(u[i] - static_cast<double>(i) / n));
  }
  CHECK(ks < 0.05);
}

TEST_CASE("ring samples") {
  RingOptions opt;
  opt.n = 1024;
  opt.seed = 9;
  const auto plain = sample_ring(opt);
  for (std::size_t i = 0; i < plain.size(); ++i) {
    CHECK(norm(plain[i]) >= opt.inner_radius);
    CHECK(norm(plain[i]) <= opt.outer_radius);
  }

  opt.shortcut = true;
  CHECK(ring_shortcut_count(opt) == 32);
  const auto cut = sample_ring(opt);
  REQUIRE(cut.size() == 1024);
  const double band = (opt.outer_radius - opt.inner_radius) / 10.0;
  std::size_t near = 0;
  for (std::size_t i = 0; i < cut.size(); ++i)
    if (std::abs(cut[i][0]) <= band && std::abs(cut[i][1]) <= opt.inner_radius && norm(cut[i]) < opt.inner_radius) ++near;
  CHECK(near == 32);

  // The shortcut variant only moves the last shortcut_count points.
  std::size_t moved = 0;
  for (std::size_t i = 0; i < cut.size(); ++i) moved += !(plain[i][0] == cut[i][0] && plain[i][1] == cut[i][1]);
  CHECK(moved == 32);
  for (std::size_t i = 0; i + 32 < cut.size(); ++i) CHECK(plain[i][0] == cut[i][0]);

  // Total-variation distance between the two empirical measures.
  CHECK(static_cast<double>(moved) / 1024.0 == doctest::Approx(32.0 / 1024.0));
  CHECK(sample_ring(opt) == cut);
}

TEST_CASE("ring options are validated") {
  RingOptions opt;
  opt.inner_radius = 1.0;
  opt.outer_radius = 0.5;
  CHECK_THROWS_AS(sample_ring(opt), InvalidInput);
  opt = RingOptions{};
  opt.shortcut = true;
  opt.shortcut_count = opt.n + 1;
  CHECK_THROWS_AS(sample_ring(opt), InvalidInput);
}

TEST_CASE("Le Cam pair") {
  LeCamOptions opt;
  const auto [mu, nu] = lecam_pair(opt);
  CHECK(total_mass(mu) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(total_mass(nu) == doctest::Approx(1.0).epsilon(1e-12));

  const double moved = opt.m * std::pow(opt.epsilon, opt.b);
  CHECK(std::abs(mass_difference_l1(mu, nu) - 2.0 * moved) <= 2.0 * moved / static_cast<double>(opt.atoms_per_density));

  // The first quantile atom sits next to the lower end of the density.
  double closest = INFINITY;
  const double low[2] = {0.0, opt.r - opt.epsilon};
  for (std::size_t i = 0; i < nu.size(); ++i) closest = std::min(closest, distance(nu.support()[i], low));
  CHECK(closest <= opt.epsilon / static_cast<double>(opt.atoms_per_density));
}

TEST_CASE("Le Cam pair with a steeper density") {
  LeCamOptions opt;
  opt.b = 2.0;
  const auto [mu, nu] = lecam_pair(opt);
  const double moved = opt.m * std::pow(opt.epsilon, opt.b);
  CHECK(std::abs(mass_difference_l1(mu, nu) - 2.0 * moved) <= 2.0 * moved / static_cast<double>(opt.atoms_per_density));
  CHECK(total_mass(nu) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scaling") {
  const auto cloud = sample_circle(200, 1);
  const auto mu = make_empirical(cloud);
  const auto same = scale_measure(mu, 1.0);
  CHECK(same.support() == mu.support());

  const auto twice = scale_cloud(cloud, 2.0);
  for (std::size_t i = 0; i < twice.size(); ++i) CHECK(norm(twice[i]) == doctest::Approx(2.0).epsilon(1e-12));

  const auto scaled = scale_measure(mu, 2.0);
  const SpatialIndex a(mu);
  const SpatialIndex b(scaled);
  const DtmParams params{0.1, 2.0, 2.0};
  for (const auto& q : std::vector<Point>{{0.3, 0.1}, {1.2, -0.4}, {0.0, 0.0}}) {
    const Point sq{2.0 * q[0], 2.0 * q[1]};
    CHECK(dtm_value(b, sq, params) == doctest::Approx(2.0 * dtm_value(a, q, params)).epsilon(1e-12));
  }
}
