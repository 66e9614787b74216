#include <benchmark/benchmark.h>

#include "fdtm/dtm.hpp"
#include "fdtm/graph.hpp"
#include "fdtm/measures.hpp"
#include "fdtm/paths.hpp"
#include "fdtm/spatial_index.hpp"

namespace {

using namespace fdtm;

void BM_DtmValue(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SpatialIndex index(sample_circle(n, 1));
  const DtmParams params;
  const PointCloud queries = sample_circle(256, 2);
  DtmEvaluator eval(index, params);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval.value(queries[i]));
    i = (i + 1) % queries.size();
  }
}
BENCHMARK(BM_DtmValue)->RangeMultiplier(4)->Range(256, 16384);

void BM_SegmentIntegral(benchmark::State& state) {
  const SpatialIndex index(sample_circle(4096, 1));
  const DtmParams params;
  const Point x{1.0, 0.0};
  const Point y{-0.5, 0.8};
  for (auto _ : state)
    benchmark::DoNotOptimize(dtm_segment_integral(index, x, y, params, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_SegmentIntegral)->Arg(12)->Arg(100)->Arg(1000);

void BM_BuildYao(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PointCloud cloud = sample_circle(n, 3);
  const SpatialIndex index(cloud);
  const DtmParams params;
  const std::size_t c = default_log_parameter(n);
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(cloud, index, Yao{c}, SubdividedDtm{c}, params, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildYao)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond)->Complexity();

void BM_BuildComplete(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PointCloud cloud = sample_circle(n, 4);
  const SpatialIndex index(cloud);
  const DtmParams params;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        build_graph(cloud, index, Complete{}, SubdividedDtm{default_log_parameter(n)}, params, 1));
}
BENCHMARK(BM_BuildComplete)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SingleSource(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PointCloud cloud = sample_circle(n, 5);
  const MetricGraph graph = build_graph(make_empirical(cloud), KNearest{default_log_parameter(n)}, SampleFermat{1.1},
                                        DtmParams{}, 1);
  std::size_t source = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(single_source(graph, source));
    source = (source + 1) % n;
  }
}
BENCHMARK(BM_SingleSource)->RangeMultiplier(4)->Range(256, 16384);

}  // namespace
BENCHMARK_MAIN();
