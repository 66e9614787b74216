#include "fdtm/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "fdtm/dtm.hpp"
#include "fdtm/graph.hpp"
#include "fdtm/measures.hpp"
#include "fdtm/oracles.hpp"
#include "fdtm/paths.hpp"
#include "fdtm/random.hpp"
#include "fdtm/spatial_index.hpp"

namespace fdtm {

namespace {

constexpr double kTol = 1e-9;

/// Running maximum with a description of the case that produced it.
class Worst {
 public:
  void update(double value, const std::string& where = {}) {
    ++cases_;
    if (value > worst_ || cases_ == 1) {
      worst_ = value;
      if (!where.empty()) where_ = where;
    }
  }
  CheckResult finish(std::string name, double bound) const {
    CheckResult r;
    r.name = std::move(name);
    r.worst = worst_;
    r.bound = bound;
    r.cases = cases_;
    r.passed = cases_ > 0 && worst_ <= bound;
    r.detail = where_;
    return r;
  }

 private:
  double worst_ = -std::numeric_limits<double>::infinity();
  std::size_t cases_ = 0;
  std::string where_;
};

Point random_point(Rng& rng, std::size_t dim, double spread = 1.0) {
  Point p(dim);
  for (double& c : p) c = spread * rng.normal();
  return p;
}

PointCloud random_cloud(Rng& rng, std::size_t n, std::size_t dim) {
  PointCloud cloud(dim);
  for (std::size_t i = 0; i < n; ++i) cloud.push_back(random_point(rng, dim));
  return cloud;
}

PointCloud uniform_square(Rng& rng, std::size_t n) {
  PointCloud cloud(2);
  for (std::size_t i = 0; i < n; ++i) {
    const double p[2] = {rng.uniform(), rng.uniform()};
    cloud.push_back(p);
  }
  return cloud;
}

/// Random weighted measure, sometimes with duplicated atoms or equal masses.
WeightedMeasure random_measure(Rng& rng, std::size_t max_atoms) {
  const std::size_t n = 1 + rng.below(max_atoms);
  const std::size_t dim = 1 + rng.below(3);
  PointCloud cloud = random_cloud(rng, n, dim);
  if (n > 2 && rng.below(4) == 0) {
    const auto src = cloud[rng.below(n)];
    const Point copy(src.begin(), src.end());
    std::copy(copy.begin(), copy.end(), cloud.mutable_point(rng.below(n)).begin());
  }
  std::vector<double> masses(n, 1.0);
  if (rng.below(3) != 0)
    for (double& w : masses) w = rng.uniform(0.05, 1.0);
  double total = 0.0;
  for (double w : masses) total += w;
  for (double& w : masses) w /= total;
  return WeightedMeasure(std::move(cloud), std::move(masses));
}

DtmParams random_params(Rng& rng) {
  static constexpr double kPs[] = {1.0, 1.5, 2.0, 3.0};
  DtmParams params;
  params.m = rng.uniform(0.01, 1.0);
  if (rng.below(8) == 0) params.m = 1.0;
  params.p = kPs[rng.below(4)];
  params.beta = 1.0 + rng.below(3);
  return params;
}

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

namespace checks {

CheckResult dtm_exactness(std::uint64_t seed, std::size_t measures, std::size_t max_atoms) {
  Rng rng(seed, 1);
  Worst worst;
  for (std::size_t k = 0; k < measures; ++k) {
    const WeightedMeasure mu = random_measure(rng, max_atoms);
    const DtmParams params = random_params(rng);
    const SpatialIndex index(mu);
    for (int q = 0; q < 10; ++q) {
      Point x = random_point(rng, mu.dim(), 1.5);
      if (q == 0) x.assign(mu.support()[0].begin(), mu.support()[0].end());
      const double got = dtm_value(index, x, params);
      const double want = oracles::dtm_piecewise_quadrature(mu, x, params);
      worst.update(relative(got, want), "measure " + std::to_string(k));
    }
  }
  return worst.finish("dtm matches quadrature oracle (rel err)", kTol);
}

CheckResult dtm_lipschitz(std::uint64_t seed, std::size_t measures, std::size_t pairs) {
  Rng rng(seed, 2);
  Worst worst;
  for (std::size_t k = 0; k < measures; ++k) {
    const WeightedMeasure mu = k % 2 == 0 ? make_empirical(random_cloud(rng, 200 + 100 * k, 2))
                                          : random_measure(rng, 40);
    const SpatialIndex index(mu);
    const DtmParams params = random_params(rng);
    DtmEvaluator eval(index, params);
    for (std::size_t i = 0; i < pairs; ++i) {
      const Point x = random_point(rng, mu.dim(), 2.0);
      Point y = x;
      const double scale = i % 2 == 0 ? 1e-3 : 1.0;
      for (double& c : y) c += scale * rng.normal();
      const double gap = std::abs(eval.value(x) - eval.value(y)) - distance(x, y);
      worst.update(gap, "measure " + std::to_string(k));
    }
  }
  return worst.finish("dtm is 1-Lipschitz (excess over |x-y|)", kTol);
}

CheckResult dtm_wasserstein_stability(std::uint64_t seed, std::size_t pairs, std::size_t atoms) {
  Rng rng(seed, 3);
  Worst worst;
  for (std::size_t k = 0; k < pairs; ++k) {
    const PointCloud a = random_cloud(rng, atoms, 2);
    PointCloud b(2);
    const double jitter = k % 2 == 0 ? 0.05 : 1.0;
    for (std::size_t i = 0; i < atoms; ++i) {
      Point p(a[i].begin(), a[i].end());
      for (double& c : p) c += jitter * rng.normal();
      b.push_back(p);
    }
    const WeightedMeasure mu = make_empirical(a);
    const WeightedMeasure nu = make_empirical(b);
    DtmParams params;
    params.m = static_cast<double>(1 + rng.below(atoms)) / static_cast<double>(atoms) - 0.01 * rng.uniform();
    params.p = k % 3 == 0 ? 1.0 : 2.0;
    const double w = oracles::wasserstein_bruteforce(mu, nu, params.p);
    const double allowance = w / std::pow(params.m, 1.0 / params.p);
    const SpatialIndex ia(mu);
    const SpatialIndex ib(nu);
    double gap = -std::numeric_limits<double>::infinity();
    constexpr int kGrid = 21;
    for (int i = 0; i < kGrid; ++i)
      for (int j = 0; j < kGrid; ++j) {
        const double x[2] = {-3.0 + 6.0 * i / (kGrid - 1), -3.0 + 6.0 * j / (kGrid - 1)};
        gap = std::max(gap, std::abs(dtm_value(ia, x, params) - dtm_value(ib, x, params)) - allowance);
      }
    worst.update(gap, "pair " + std::to_string(k));
  }
  return worst.finish("dtm Wasserstein stability (excess over W_p/m^(1/p))", kTol);
}

CheckResult dtm_scaling(std::uint64_t seed) {
  Rng rng(seed, 4);
  Worst worst;
  for (int k = 0; k < 20; ++k) {
    const WeightedMeasure mu = random_measure(rng, 30);
    const DtmParams params = random_params(rng);
    for (double s : {0.5, 3.0, 7.25}) {
      const SpatialIndex base(mu);
      const SpatialIndex scaled(scale_measure(mu, s));
      for (int q = 0; q < 10; ++q) {
        Point x = random_point(rng, mu.dim());
        Point sx = x;
        for (double& c : sx) c *= s;
        worst.update(relative(dtm_value(scaled, sx, params), s * dtm_value(base, x, params)));
      }
    }
  }
  return worst.finish("dtm scales linearly with the measure (rel err)", kTol);
}

CheckResult dtm_diameter_bound(std::uint64_t seed) {
  Rng rng(seed, 5);
  Worst worst;
  for (int k = 0; k < 20; ++k) {
    const WeightedMeasure mu = random_measure(rng, 25);
    const DtmParams params = random_params(rng);
    const SpatialIndex index(mu);
    const double diam = diameter(mu.support());
    for (int q = 0; q < 50; ++q) {
      // Random convex combination of the atoms.
      Point x(mu.dim(), 0.0);
      double total = 0.0;
      std::vector<double> lambda(mu.size());
      for (double& l : lambda) total += (l = rng.uniform());
      for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t a = 0; a < mu.dim(); ++a) x[a] += lambda[i] / total * mu.support()[i][a];
      worst.update(dtm_value(index, x, params) - diam);
    }
  }
  return worst.finish("dtm bounded by the support diameter on its hull", kTol);
}

CheckResult dtm_single_atom_mass(std::uint64_t seed) {
  Rng rng(seed, 6);
  Worst worst;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = 2 + rng.below(300);
    const PointCloud cloud = random_cloud(rng, n, 1 + rng.below(3));
    const SpatialIndex index(cloud);
    DtmParams params;
    params.m = 1.0 / static_cast<double>(n);
    params.p = 1.0 + rng.below(3);
    for (int q = 0; q < 20; ++q) {
      const Point x = random_point(rng, cloud.dim());
      const double nn = std::sqrt(index.knn_linear(x, 1).front().squared_distance);
      worst.update(relative(dtm_value(index, x, params), nn));
    }
  }
  return worst.finish("dtm with m = 1/n is the nearest-neighbour distance", kTol);
}

CheckResult spatial_index_agreement(std::uint64_t seed) {
  Rng rng(seed, 7);
  Worst worst;
  for (int k = 0; k < 10; ++k) {
    const std::size_t n = 10 + rng.below(3000);
    PointCloud cloud = random_cloud(rng, n, 1 + rng.below(4));
    // Exact duplicates and a lattice exercise tie-breaking by index.
    for (std::size_t i = 0; i + 1 < n; i += 7) {
      const Point copy(cloud[i].begin(), cloud[i].end());
      std::copy(copy.begin(), copy.end(), cloud.mutable_point(i + 1).begin());
    }
    const SpatialIndex index(cloud);
    double mismatches = 0.0;
    for (int q = 0; q < 50; ++q) {
      Point x = random_point(rng, cloud.dim());
      if (q % 5 == 0) {
        const auto v = cloud[rng.below(n)];
        x.assign(v.begin(), v.end());
      }
      const std::size_t kk = 1 + rng.below(std::min<std::size_t>(n, 200));
      if (index.knn(x, kk) != index.knn_linear(x, kk)) mismatches += 1.0;
    }
    worst.update(mismatches, "cloud " + std::to_string(k));
  }
  return worst.finish("kd-tree neighbours equal linear scan (mismatches)", 0.0);
}

CheckResult batch_determinism(std::uint64_t seed) {
  Rng rng(seed, 8);
  const PointCloud cloud = random_cloud(rng, 2000, 2);
  const SpatialIndex index(cloud);
  const PointCloud queries = random_cloud(rng, 1000, 2);
  const DtmParams params;
  std::vector<double> sequential;
  for (std::size_t i = 0; i < queries.size(); ++i) sequential.push_back(dtm_value(index, queries[i], params));
  Worst worst;
  for (unsigned threads : {1U, 2U, 4U}) {
    const auto batch = dtm_batch(index, queries, params, threads);
    double diffs = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i)
      if (batch[i] != sequential[i]) diffs += 1.0;
    worst.update(diffs, std::to_string(threads) + " threads");
  }
  return worst.finish("dtm_batch bit-identical to dtm_value (mismatches)", 0.0);
}

CheckResult segment_contraction(std::uint64_t seed) {
  // With m = 1 and p = 2, dtm^2 is a quadratic polynomial. It has a positive
  // minimum once two atoms differ, so the integrand is smooth.
  Rng rng(seed, 9);
  Worst worst;
  for (int k = 0; k < 20; ++k) {
    const WeightedMeasure mu = random_measure(rng, 20);
    if (mu.size() < 2) continue;
    const SpatialIndex index(mu);
    const DtmParams params{1.0, 2.0, 1.0 + rng.below(3)};
    const Point x = random_point(rng, mu.dim(), 2.0);
    const Point y = random_point(rng, mu.dim(), 2.0);
    for (std::size_t r : {8, 16, 32}) {
      const double coarse = dtm_segment_integral(index, x, y, params, r / 2);
      const double mid = dtm_segment_integral(index, x, y, params, r);
      const double fine = dtm_segment_integral(index, x, y, params, 2 * r);
      worst.update(std::abs(fine - mid) - std::abs(mid - coarse), "r=" + std::to_string(r));
    }
  }
  return worst.finish("segment integral refinement contracts", kTol);
}

CheckResult shortest_path_oracle(std::uint64_t seed, std::size_t graphs) {
  Rng rng(seed, 10);
  Worst worst;
  for (std::size_t g = 0; g < graphs; ++g) {
    const std::size_t n = 2 + rng.below(7);
    PointCloud vertices(1);
    for (std::size_t i = 0; i < n; ++i) {
      const double p[1] = {static_cast<double>(i)};
      vertices.push_back(p);
    }
    std::vector<Edge> edges;
    const double density = rng.uniform(0.2, 0.9);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j)
        if (rng.uniform() < density) {
          // A few exact ties and zero weights exercise tie-breaking.
          const double w = rng.below(5) == 0 ? static_cast<double>(rng.below(3)) : rng.uniform(0.0, 10.0);
          edges.push_back({i, j, w});
        }
    const MetricGraph graph(vertices, edges, Complete{}, SampleFermat{}, DtmParams{});
    const std::size_t s = rng.below(n);
    const auto tree = single_source(graph, s);
    for (std::size_t t = 0; t < n; ++t) {
      const double want = oracles::exhaustive_shortest(graph, s, t);
      const double got = tree.dist[t];
      const double err = std::isinf(want) || std::isinf(got) ? (want == got ? 0.0 : 1.0) : relative(got, want);
      worst.update(err, "graph " + std::to_string(g));
    }
  }
  return worst.finish("dijkstra equals exhaustive enumeration (rel err)", 1e-12);
}

std::vector<CheckResult> metric_axioms(std::uint64_t seed, std::size_t n, std::size_t triples, bool inject_fault) {
  const PointCloud cloud = sample_circle(n, seed);
  const DtmParams params;
  const MetricGraph graph =
      build_graph(cloud, Complete{}, SubdividedDtm{default_log_parameter(n)}, params);
  std::vector<std::size_t> sources(n);
  for (std::size_t i = 0; i < n; ++i) sources[i] = i;
  auto dist = all_pairs_sampled(graph, sources);
  if (inject_fault) {
    dist[0][1] *= 3.0;
    dist[1][0] = dist[0][1];
  }
  double scale = 0.0;
  for (const auto& row : dist)
    for (double d : row) scale = std::max(scale, d);

  Worst symmetry;
  Worst diagonal;
  for (std::size_t i = 0; i < n; ++i) {
    diagonal.update(std::abs(dist[i][i]) / scale);
    for (std::size_t j = i + 1; j < n; ++j)
      symmetry.update(std::abs(dist[i][j] - dist[j][i]) / scale, std::to_string(i) + "," + std::to_string(j));
  }
  Rng rng(seed, 11);
  Worst triangle;
  auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
    triangle.update((dist[i][k] - dist[i][j] - dist[j][k]) / scale,
                    "d(" + std::to_string(i) + "," + std::to_string(k) + ") > d(" + std::to_string(i) + "," +
                        std::to_string(j) + ") + d(" + std::to_string(j) + "," + std::to_string(k) + ")");
  };
  // Triples through the first pair first, so an injected fault is always seen.
  for (std::size_t j = 2; j < n; ++j) check(0, j, 1);
  for (std::size_t t = 0; t < triples; ++t) check(rng.below(n), rng.below(n), rng.below(n));
  return {symmetry.finish("fdtm metric: symmetry (rel)", kTol),
          diagonal.finish("fdtm metric: zero diagonal (rel)", kTol),
          triangle.finish("fdtm metric: triangle inequality (rel excess)", kTol)};
}

CheckResult geodesic_length_bound(std::uint64_t seed, std::size_t clouds) {
  Rng rng(seed, 12);
  Worst worst;
  for (std::size_t c = 0; c < clouds; ++c) {
    const std::size_t n = 30 + rng.below(31);
    const PointCloud cloud = uniform_square(rng, n);
    DtmParams params;
    params.beta = 1.0 + rng.below(2);
    const SpatialIndex index(cloud);
    const MetricGraph graph = build_graph(cloud, index, Complete{}, SubdividedDtm{16}, params);
    const Point x{rng.uniform(), rng.uniform()};
    const Point y{rng.uniform(), rng.uniform()};
    const GeodesicResult geo = fdtm_query(index, graph, x, y, params);

    DtmEvaluator eval(index, params);
    double seg_max = 0.0;
    constexpr int kSamples = 1000;
    for (int t = 0; t <= kSamples; ++t) {
      const double s = static_cast<double>(t) / kSamples;
      const Point z{x[0] + s * (y[0] - x[0]), x[1] + s * (y[1] - x[1])};
      seg_max = std::max(seg_max, eval.value(z));
    }
    // Minimum over the vertices and edge midpoints of the query-augmented graph.
    PointCloud all = cloud;
    all.push_back(x);
    all.push_back(y);
    double low = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < all.size(); ++i) {
      low = std::min(low, eval.value(all[i]));
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        const Point mid{0.5 * (all[i][0] + all[j][0]), 0.5 * (all[i][1] + all[j][1])};
        low = std::min(low, eval.value(mid));
      }
    }
    const double bound = std::pow(seg_max / low, params.beta) * distance(x, y);
    worst.update(bound > 0.0 ? geo.euclidean_length / bound : 0.0, "cloud " + std::to_string(c));
  }
  return worst.finish("geodesic euclidean length bound (ratio)", 1.05);
}

CheckResult straight_segment_bound(std::uint64_t seed) {
  Rng rng(seed, 13);
  Worst worst;
  for (int c = 0; c < 10; ++c) {
    const PointCloud cloud = uniform_square(rng, 80);
    const SpatialIndex index(cloud);
    const DtmParams params;
    const WeightMode modes[] = {SubdividedDtm{8}, EndpointAverageDtm{}, SampleFermat{1.5}};
    const WeightMode mode = modes[c % 3];
    const GraphTopology topo = c % 2 == 0 ? GraphTopology{KNearest{6}} : GraphTopology{Yao{8}};
    const MetricGraph graph = build_graph(cloud, index, topo, mode, params);
    EdgeWeigher weigh(&index, mode, params);
    for (int q = 0; q < 10; ++q) {
      const Point x{rng.uniform(-0.2, 1.2), rng.uniform(-0.2, 1.2)};
      const Point y{rng.uniform(-0.2, 1.2), rng.uniform(-0.2, 1.2)};
      const double direct = weigh(x, y);
      worst.update((fdtm_query(index, graph, x, y, params).distance - direct) / direct);
    }
  }
  return worst.finish("query distance <= direct edge weight (rel excess)", kTol);
}

CheckResult query_scaling(std::uint64_t seed) {
  Rng rng(seed, 14);
  Worst worst;
  for (int c = 0; c < 10; ++c) {
    const PointCloud cloud = uniform_square(rng, 60);
    DtmParams params;
    params.beta = 1.0 + rng.below(2);
    params.m = rng.uniform(0.05, 0.5);
    const Point x{rng.uniform(), rng.uniform()};
    const Point y{rng.uniform(), rng.uniform()};
    const GraphTopology topo = c % 2 == 0 ? GraphTopology{Complete{}} : GraphTopology{Yao{7}};
    const double base = fdtm_query(make_empirical(cloud), build_graph(cloud, topo, SubdividedDtm{8}, params), x, y,
                                   params)
                            .distance;
    for (double s : {0.5, 3.0}) {
      const PointCloud scaled = scale_cloud(cloud, s);
      const Point sx{s * x[0], s * x[1]};
      const Point sy{s * y[0], s * y[1]};
      const double d = fdtm_query(make_empirical(scaled), build_graph(scaled, topo, SubdividedDtm{8}, params), sx,
                                  sy, params)
                           .distance;
      worst.update(relative(d, std::pow(s, params.beta + 1.0) * base), "s=" + std::to_string(s));
    }
  }
  return worst.finish("query distance scales by s^(beta+1) (rel err)", kTol);
}

CheckResult edge_weight_scaling(std::uint64_t seed) {
  Rng rng(seed, 15);
  Worst worst;
  const PointCloud cloud = uniform_square(rng, 120);
  const DtmParams params;
  for (double s : {0.5, 3.0}) {
    const PointCloud scaled = scale_cloud(cloud, s);
    for (const WeightMode& mode : {WeightMode{SubdividedDtm{6}}, WeightMode{SampleFermat{1.1}}}) {
      const double power = std::holds_alternative<SampleFermat>(mode) ? 1.1 : params.beta + 1.0;
      const MetricGraph a = build_graph(cloud, KNearest{6}, mode, params);
      const MetricGraph b = build_graph(scaled, KNearest{6}, mode, params);
      for (std::size_t e = 0; e < a.edge_count(); ++e)
        worst.update(relative(b.edges()[e].weight, std::pow(s, power) * a.edges()[e].weight), describe(mode));
    }
  }
  return worst.finish("edge weights scale by s^(beta+1) / s^alpha (rel err)", kTol);
}

CheckResult topology_monotonicity(std::uint64_t seed) {
  Rng rng(seed, 16);
  Worst worst;
  const PointCloud cloud = uniform_square(rng, 150);
  const DtmParams params;
  const SpatialIndex index(cloud);
  const WeightMode mode = SubdividedDtm{6};
  std::vector<MetricGraph> graphs;
  for (std::size_t k : {3, 4, 8}) graphs.push_back(build_graph(cloud, index, KNearest{k}, mode, params));
  graphs.push_back(build_graph(cloud, index, Complete{}, mode, params));
  for (std::size_t g = 0; g + 1 < graphs.size(); ++g) {
    const auto small = graphs[g].edges();
    const auto big = graphs[g + 1].edges();
    double missing = 0.0;
    for (const Edge& e : small)
      if (!std::binary_search(big.begin(), big.end(), e,
                              [](const Edge& a, const Edge& b) { return a.i < b.i || (a.i == b.i && a.j < b.j); }))
        missing += 1.0;
    worst.update(missing, "edge inclusion");
    for (std::size_t s : {0, 17, 99}) {
      const auto d_small = single_source(graphs[g], s).dist;
      const auto d_big = single_source(graphs[g + 1], s).dist;
      for (std::size_t v = 0; v < d_small.size(); ++v)
        if (std::isfinite(d_small[v]) && d_small[v] > 0.0) worst.update((d_big[v] - d_small[v]) / d_small[v] - kTol, "distance");
    }
  }
  return worst.finish("more edges never lengthen distances", 0.0);
}

CheckResult endpoint_average_agreement(std::uint64_t seed) {
  const PointCloud cloud = sample_circle(512, seed);
  const SpatialIndex index(cloud);
  const DtmParams params;
  const MetricGraph sub = build_graph(cloud, index, KNearest{10}, SubdividedDtm{64}, params);
  const MetricGraph avg = build_graph(cloud, index, KNearest{10}, EndpointAverageDtm{}, params);
  const double cutoff = 0.05 * diameter(cloud);
  Worst worst;
  for (std::size_t e = 0; e < sub.edge_count(); ++e) {
    const Edge& a = sub.edges()[e];
    if (distance(cloud[a.i], cloud[a.j]) >= cutoff) continue;
    worst.update(relative(avg.edges()[e].weight, a.weight));
  }
  return worst.finish("endpoint-average vs subdivided on short edges (rel)", 0.10);
}

CheckResult wasserstein_axioms(std::uint64_t seed) {
  Rng rng(seed, 17);
  Worst worst;
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + rng.below(6);
    const double p = 1.0 + rng.below(3);
    const WeightedMeasure a = make_empirical(random_cloud(rng, n, 2));
    const WeightedMeasure b = make_empirical(random_cloud(rng, n, 2));
    const WeightedMeasure c = make_empirical(random_cloud(rng, n, 2));
    const double ab = oracles::wasserstein_bruteforce(a, b, p);
    const double ba = oracles::wasserstein_bruteforce(b, a, p);
    const double bc = oracles::wasserstein_bruteforce(b, c, p);
    const double ac = oracles::wasserstein_bruteforce(a, c, p);
    worst.update(std::abs(ab - ba), "symmetry");
    worst.update(ac - ab - bc, "triangle");
    worst.update(oracles::wasserstein_bruteforce(a, a, p), "identity");
  }
  return worst.finish("brute-force Wasserstein is a metric", kTol);
}

CheckResult circle_oracle_refinement() {
  Worst worst;
  for (double m : {0.05, 0.1, 0.2})
    for (double beta : {1.0, 2.0}) {
      const DtmParams params{m, 2.0, beta};
      const auto best = oracles::circle_fdtm_analytic(std::numbers::pi, params, 200);
      worst.update(best.value - oracles::circle_chord_fdtm(std::numbers::pi, params, 200));
    }
  return worst.finish("circle oracle: best chord count <= single chord", 0.0);
}

CheckResult lecam_mass_difference(double b, double epsilon) {
  LeCamOptions options;
  options.b = b;
  options.epsilon = epsilon;
  const auto [mu, nu] = lecam_pair(options);
  const double target = 2.0 * options.m * std::pow(epsilon, b);
  Worst worst;
  worst.update(std::abs(mass_difference_l1(mu, nu) - target));
  return worst.finish("Le Cam pair: mass difference = 2 m eps^b", target / static_cast<double>(options.atoms_per_density));
}

CheckResult lecam_fdtm_order(double b, double epsilon) {
  LeCamOptions options;
  options.b = b;
  options.epsilon = epsilon;
  const auto [mu, nu] = lecam_pair(options);
  const DtmParams params{options.m, 2.0, 2.0};
  const Point x{1.0, 0.0};
  const Point mx{-1.0, 0.0};
  auto fdtm = [&](const WeightedMeasure& measure) {
    const MetricGraph graph = build_graph(measure, Complete{}, SubdividedDtm{32}, params);
    return fdtm_query(measure, graph, mx, x, params).distance;
  };
  const double d_mu = fdtm(mu);
  const double d_nu = fdtm(nu);
  Worst worst;
  worst.update(d_nu - d_mu, "D_mu=" + std::to_string(d_mu) + " D_nu=" + std::to_string(d_nu));
  CheckResult r = worst.finish("Le Cam pair: D_nu(-x,x) < D_mu(-x,x) (difference)", 0.0);
  r.passed = r.worst < 0.0;
  return r;
}

}  // namespace checks

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  const std::uint64_t s = options.seed;
  std::vector<CheckResult> out;
  out.push_back(checks::dtm_exactness(s));
  out.push_back(checks::dtm_lipschitz(s));
  out.push_back(checks::dtm_wasserstein_stability(s));
  out.push_back(checks::dtm_scaling(s));
  out.push_back(checks::dtm_diameter_bound(s));
  out.push_back(checks::dtm_single_atom_mass(s));
  out.push_back(checks::spatial_index_agreement(s));
  out.push_back(checks::batch_determinism(s));
  out.push_back(checks::segment_contraction(s));
  out.push_back(checks::shortest_path_oracle(s));
  for (auto& r : checks::metric_axioms(s, 200, 100'000, options.inject_fault)) out.push_back(std::move(r));
  out.push_back(checks::geodesic_length_bound(s));
  out.push_back(checks::straight_segment_bound(s));
  out.push_back(checks::query_scaling(s));
  out.push_back(checks::edge_weight_scaling(s));
  out.push_back(checks::topology_monotonicity(s));
  out.push_back(checks::endpoint_average_agreement(s));
  out.push_back(checks::wasserstein_axioms(s));
  out.push_back(checks::circle_oracle_refinement());
  out.push_back(checks::lecam_mass_difference());
  out.push_back(checks::lecam_fdtm_order());
  return out;
}

void print_table(std::ostream& out, const std::vector<CheckResult>& results) {
  std::size_t width = 5;
  for (const auto& r : results) width = std::max(width, r.name.size());
  char line[512];
  std::snprintf(line, sizeof line, "%-*s  %-6s  %12s  %12s  %12s  %8s\n", static_cast<int>(width), "check", "status",
                "worst", "bound", "slack", "cases");
  out << line;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-*s  %-6s  %12.4e  %12.4e  %12.4e  %8zu", static_cast<int>(width),
                  r.name.c_str(), r.passed ? "PASS" : "FAIL", r.worst, r.bound, r.slack(), r.cases);
    out << line;
    if (!r.passed && !r.detail.empty()) out << "  [" << r.detail << ']';
    out << '\n';
  }
}

bool all_passed(const std::vector<CheckResult>& results) noexcept {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

}  // namespace fdtm
