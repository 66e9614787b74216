#include <doctest.h>

#include <algorithm>
#include <vector>

#include "fdtm/error.hpp"
#include "fdtm/random.hpp"
#include "fdtm/spatial_index.hpp"

using namespace fdtm;

namespace {

PointCloud gaussian_cloud(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  PointCloud c(dim);
  Point p(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& x : p) x = rng.normal();
    c.push_back(p);
  }
  return c;
}

}  // namespace

TEST_CASE("knn matches the linear scan") {
  for (const std::size_t n : {10UL, 63UL, 64UL, 500UL, 3000UL}) {
    for (const std::size_t dim : {1UL, 2UL, 3UL, 5UL}) {
      const auto cloud = gaussian_cloud(n, dim, n * 10 + dim);
      const SpatialIndex index(cloud);
      CHECK(index.uses_tree() == (n >= SpatialIndex::kLinearScanLimit));
      Rng rng(dim);
      Point q(dim);
      for (int trial = 0; trial < 20; ++trial) {
        for (double& x : q) x = 1.5 * rng.normal();
        const std::size_t k = 1 + rng.below(n + 5);
        const auto fast = index.knn(q, k);
        const auto slow = index.knn_linear(q, k);
        REQUIRE(fast.size() == std::min(k, n));
        CHECK(fast == slow);
      }
    }
  }
}

TEST_CASE("ties are broken by index") {
  // Grid points at equal distance from the origin.
  PointCloud cloud(2);
  for (int i = 0; i < 100; ++i) {
    const double p[2] = {static_cast<double>(i % 10) - 4.5, static_cast<double>(i / 10) - 4.5};
    cloud.push_back(p);
  }
  const SpatialIndex index(cloud);
  const double origin[2] = {0.0, 0.0};
  const auto nn = index.knn(origin, 100);
  for (std::size_t i = 1; i < nn.size(); ++i) {
    CHECK(nn[i - 1].squared_distance <= nn[i].squared_distance);
    if (nn[i - 1].squared_distance == nn[i].squared_distance) CHECK(nn[i - 1].index < nn[i].index);
  }
  CHECK(nn == index.knn_linear(origin, 100));
}

TEST_CASE("duplicate points are all reported") {
  PointCloud cloud(2);
  const double p[2] = {1.0, 1.0};
  for (int i = 0; i < 200; ++i) cloud.push_back(p);
  const SpatialIndex index(cloud);
  const double q[2] = {0.0, 0.0};
  const auto nn = index.knn(q, 150);
  REQUIRE(nn.size() == 150);
  for (std::size_t i = 0; i < nn.size(); ++i) CHECK(nn[i].index == i);
}

TEST_CASE("within returns the same points in the same order for any radius") {
  const auto cloud = gaussian_cloud(2000, 2, 8);
  const SpatialIndex index(cloud);
  const double q[2] = {0.2, -0.1};
  std::vector<Neighbor> small;
  std::vector<Neighbor> large;
  index.within(q, 0.1, small);
  index.within(q, 0.5, large);
  std::vector<Neighbor> filtered;
  for (const auto& n : large)
    if (n.squared_distance <= 0.1) filtered.push_back(n);
  CHECK(filtered == small);

  std::vector<double> d2;
  index.within_distances(q, 0.5, d2);
  REQUIRE(d2.size() == large.size());
  for (std::size_t i = 0; i < d2.size(); ++i) CHECK(d2[i] == large[i].squared_distance);

  std::size_t expected = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) expected += squared_distance(q, cloud[i]) <= 0.5;
  CHECK(large.size() == expected);
}

TEST_CASE("knn radius bound encloses k points") {
  const auto cloud = gaussian_cloud(1000, 3, 2);
  const SpatialIndex index(cloud);
  const double q[3] = {0.5, 0.5, 0.5};
  for (const std::size_t k : {1UL, 7UL, 100UL, 1000UL}) {
    const double r2 = index.knn_radius_bound(q, k);
    CHECK(r2 >= index.knn_linear(q, k).back().squared_distance);
  }
}

TEST_CASE("locality order is a permutation") {
  const auto cloud = gaussian_cloud(777, 2, 3);
  auto order = SpatialIndex(cloud).locality_order();
  std::sort(order.begin(), order.end());
  for (std::size_t i = 0; i < order.size(); ++i) CHECK(order[i] == i);
}

TEST_CASE("query dimension is checked") {
  const SpatialIndex index(gaussian_cloud(100, 2, 1));
  const double q[3] = {0, 0, 0};
  CHECK_THROWS_AS((void)index.knn(q, 3), InvalidInput);
  CHECK_THROWS_AS(SpatialIndex(PointCloud(2)), InvalidInput);
}
