#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <vector>

#include "fdtm/error.hpp"
#include "fdtm/graph.hpp"
#include "fdtm/measures.hpp"
#include "fdtm/oracles.hpp"
#include "fdtm/random.hpp"

using namespace fdtm;

namespace {

using Pairs = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

PointCloud uniform_square(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  PointCloud c(2);
  for (std::size_t i = 0; i < n; ++i) {
    const double p[2] = {rng.uniform(), rng.uniform()};
    c.push_back(p);
  }
  return c;
}

// Direct Yao construction with atan2 for every pair.
Pairs yao_reference(const PointCloud& v, std::size_t cones) {
  const double sector = 2 * std::numbers::pi / static_cast<double>(cones);
  std::set<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t i = 0; i < v.size(); ++i) {
    std::vector<std::pair<double, std::uint32_t>> best(cones, {std::numeric_limits<double>::infinity(), 0});
    for (std::uint32_t j = 0; j < v.size(); ++j) {
      if (i == j) continue;
      const double dx = v[j][0] - v[i][0];
      const double dy = v[j][1] - v[i][1];
      double a = std::atan2(dy, dx);
      if (a < 0) a += 2 * std::numbers::pi;
      const auto c = std::min(static_cast<std::size_t>(a / sector), cones - 1);
      best[c] = std::min(best[c], std::make_pair(dx * dx + dy * dy, j));
    }
    for (const auto& [d, j] : best)
      if (d < std::numeric_limits<double>::infinity()) out.insert({std::min(i, j), std::max(i, j)});
  }
  return {out.begin(), out.end()};
}

bool subset(const Pairs& a, const Pairs& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

}  // namespace

TEST_CASE("default log parameter") {
  CHECK(default_log_parameter(2) == 6);
  CHECK(default_log_parameter(64) == 6);
  CHECK(default_log_parameter(65) == 7);
  CHECK(default_log_parameter(1024) == 10);
  CHECK(default_log_parameter(4096) == 12);
}

TEST_CASE("complete graph on three points") {
  const auto g = build_graph(uniform_square(3, 1), Complete{}, SubdividedDtm{4}, DtmParams{0.5, 2, 1});
  CHECK(g.edge_count() == 3);
  for (const auto& e : g.edges()) {
    CHECK(e.i < e.j);
    CHECK(e.weight > 0.0);
  }
}

TEST_CASE("sample Fermat weight") {
  const PointCloud two(2, {0.0, 0.0, 1.0, 0.0});
  const auto g = build_graph(two, Complete{}, SampleFermat{2.0}, DtmParams{});
  REQUIRE(g.edge_count() == 1);
  CHECK(g.edges()[0].weight == 1.0);
}

TEST_CASE("subdivided weights agree with the high-resolution integral") {
  const auto cloud = uniform_square(5, 3);
  const auto mu = make_empirical(cloud);
  const DtmParams params{0.3, 2.0, 2.0};
  const auto g = build_graph(mu, Complete{}, SubdividedDtm{default_log_parameter(5)}, params);
  for (const auto& e : g.edges()) {
    const double ref = oracles::high_resolution_edge_weight(mu, cloud[e.i], cloud[e.j], params);
    CHECK(std::abs(e.weight - ref) <= 0.05 * ref);
  }
}

TEST_CASE("edge count bounds") {
  const auto cloud = uniform_square(1024, 4);
  CHECK(select_edges(cloud, KNearest{10}).size() <= 10240);
  CHECK(select_edges(cloud, Yao{10}).size() <= 10240);

  const auto g = build_graph(uniform_square(100, 2), Complete{}, SampleFermat{}, DtmParams{});
  const auto report = edge_count_bound_check(g);
  CHECK(report.edges == 4950);
  CHECK(report.quadratic);
  CHECK(report.within_topology_bound);
  CHECK_FALSE(report.within_nlogn_bound);

  const auto sparse = build_graph(uniform_square(1024, 2), Yao{10}, SampleFermat{}, DtmParams{});
  const auto r2 = edge_count_bound_check(sparse);
  CHECK_FALSE(r2.quadratic);
  CHECK(r2.within_nlogn_bound);
  CHECK(r2.topology_bound == 10240);
}

TEST_CASE("knn edge sets are nested") {
  const auto cloud = uniform_square(300, 6);
  const auto all = select_edges(cloud, Complete{});
  CHECK(all.size() == 300 * 299 / 2);
  Pairs prev;
  for (std::size_t k = 1; k <= 12; ++k) {
    const auto cur = select_edges(cloud, KNearest{k});
    CHECK(subset(prev, cur));
    CHECK(subset(cur, all));
    prev = cur;
  }
}

TEST_CASE("knn is the symmetrized union") {
  const auto cloud = uniform_square(200, 8);
  const SpatialIndex index(cloud);
  const auto edges = select_edges(cloud, KNearest{3});
  std::set<std::pair<std::uint32_t, std::uint32_t>> expected;
  for (std::uint32_t i = 0; i < cloud.size(); ++i) {
    const auto nn = index.knn_linear(cloud[i], 4);
    for (const auto& n : nn)
      if (n.index != i) expected.insert({std::min(i, n.index), std::max(i, n.index)});
  }
  CHECK(Pairs(expected.begin(), expected.end()) == edges);
}

TEST_CASE("yao matches a direct construction") {
  for (const std::size_t cones : {2UL, 3UL, 6UL, 8UL, 13UL}) {
    const auto cloud = uniform_square(300, cones);
    CHECK(select_edges(cloud, Yao{cones}) == yao_reference(cloud, cones));
  }
  // Points on cone boundaries and duplicates.
  PointCloud lattice(2);
  for (int i = -3; i <= 3; ++i)
    for (int j = -3; j <= 3; ++j) {
      const double p[2] = {static_cast<double>(i), static_cast<double>(j)};
      lattice.push_back(p);
    }
  lattice.push_back(lattice[5]);
  for (const std::size_t cones : {4UL, 8UL}) CHECK(select_edges(lattice, Yao{cones}) == yao_reference(lattice, cones));
}

TEST_CASE("yao needs the plane") {
  PointCloud c(3, {0, 0, 0, 1, 0, 0, 0, 1, 0});
  try {
    (void)select_edges(c, Yao{6});
    FAIL("expected Unsupported");
  } catch (const Unsupported& e) {
    CHECK(std::string(e.what()).find("dimension 2") != std::string::npos);
  }
}

TEST_CASE("topology and weight validation") {
  const auto c = uniform_square(10, 1);
  CHECK_THROWS_AS((void)select_edges(c, KNearest{0}), InvalidInput);
  CHECK_THROWS_AS((void)select_edges(c, Yao{1}), InvalidInput);
  CHECK_THROWS_AS((void)select_edges(uniform_square(1, 1), Complete{}), InvalidInput);
  CHECK_THROWS_AS(validate(WeightMode{SubdividedDtm{0}}), InvalidInput);
  CHECK_THROWS_AS(validate(WeightMode{SampleFermat{1.0}}), InvalidInput);
}

TEST_CASE("graph construction rejects malformed edges") {
  const PointCloud pts(2, {0, 0, 1, 0, 2, 0});
  const auto make = [&](std::vector<Edge> e) { return MetricGraph(pts, std::move(e), Complete{}, SubdividedDtm{}, {}); };
  CHECK_THROWS_AS(make({Edge{1, 1, 1.0}}), InvalidInput);
  CHECK_THROWS_AS(make({Edge{0, 3, 1.0}}), InvalidInput);
  CHECK_THROWS_AS(make({Edge{0, 1, -1.0}}), InvalidInput);
  CHECK_THROWS_AS(make({Edge{0, 1, NAN}}), InvalidInput);
  CHECK_THROWS_AS(make({Edge{0, 1, 1.0}, Edge{0, 1, 2.0}}), InvalidInput);
  CHECK_THROWS_AS(make({Edge{1, 2, 1.0}, Edge{0, 1, 2.0}, Edge{1, 2, 1.0}}), InvalidInput);

  const auto g = make({Edge{1, 2, 1.0}, Edge{0, 1, 2.0}});
  CHECK(g.edges()[0].i == 0);
  CHECK(g.neighbors(1).size() == 2);
}

TEST_CASE("weights are positive and scale covariantly") {
  const auto cloud = sample_circle(200, 3);
  const DtmParams params{0.1, 2.0, 2.0};
  const auto g = build_graph(cloud, KNearest{8}, SubdividedDtm{8}, params);
  for (const auto& e : g.edges()) CHECK(e.weight > 0.0);

  const double s = 3.0;
  const auto scaled = build_graph(scale_cloud(cloud, s), KNearest{8}, SubdividedDtm{8}, params);
  REQUIRE(scaled.edge_count() == g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    CHECK(scaled.edges()[e].weight == doctest::Approx(std::pow(s, 3.0) * g.edges()[e].weight).epsilon(1e-12));

  const auto fermat = build_graph(cloud, KNearest{8}, SampleFermat{1.5}, params);
  const auto fermat_scaled = build_graph(scale_cloud(cloud, s), KNearest{8}, SampleFermat{1.5}, params);
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    CHECK(fermat_scaled.edges()[e].weight == doctest::Approx(std::pow(s, 1.5) * fermat.edges()[e].weight).epsilon(1e-12));
}

TEST_CASE("duplicate vertices give zero-weight edges") {
  const PointCloud pts(2, {0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.5, 0.5});
  const auto g = build_graph(pts, Complete{}, SubdividedDtm{5}, DtmParams{0.5, 2, 1});
  for (const auto& e : g.edges()) CHECK((e.weight == 0.0) == (e.i == 1 && e.j == 2));
}

TEST_CASE("endpoint average is close to the subdivided weight on short edges") {
  const auto cloud = sample_circle(512, 11);
  const DtmParams params{0.1, 2.0, 2.0};
  const auto sub = build_graph(cloud, KNearest{10}, SubdividedDtm{64}, params);
  const auto avg = build_graph(cloud, KNearest{10}, EndpointAverageDtm{}, params);
  const double limit = 0.05 * 2.0;
  for (std::size_t e = 0; e < sub.edge_count(); ++e) {
    const auto& a = sub.edges()[e];
    if (distance(cloud[a.i], cloud[a.j]) >= limit) continue;
    CHECK(std::abs(avg.edges()[e].weight - a.weight) <= 0.1 * a.weight);
  }
}

TEST_CASE("graph construction is deterministic across thread counts") {
  const auto cloud = sample_circle(300, 1);
  const DtmParams params{0.1, 2.0, 2.0};
  for (const WeightMode w : {WeightMode{SubdividedDtm{6}}, WeightMode{EndpointAverageDtm{}}}) {
    const auto a = build_graph(cloud, Yao{7}, w, params, 1);
    const auto b = build_graph(cloud, Yao{7}, w, params, 3);
    CHECK(std::equal(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end()));
  }
}

TEST_CASE("descriptions") {
  CHECK(describe(GraphTopology{Complete{}}) == "complete");
  CHECK(describe(GraphTopology{KNearest{4}}) == "knn(k=4)");
  CHECK(describe(GraphTopology{Yao{9}}) == "yao(cones=9)");
  CHECK(describe(WeightMode{SubdividedDtm{3}}) == "subdiv(r=3)");
  CHECK(describe(WeightMode{EndpointAverageDtm{}}) == "avg");
  CHECK(describe(WeightMode{SampleFermat{1.1}}).rfind("fermat(alpha=1.1", 0) == 0);
}
