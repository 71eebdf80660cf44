#include <benchmark/benchmark.h>

#include "ifsr/detection.hpp"
#include "ifsr/embedding.hpp"
#include "ifsr/ghost.hpp"
#include "ifsr/ifs.hpp"
#include "ifsr/separation.hpp"

using namespace ifsr;

namespace {

const PointCloud& henon_cloud() {
  static const PointCloud c =
      generate(henon_pair(), BernoulliRule{{0.5, 0.5}, 1}, GenerateOptions{}).cloud;
  return c;
}

void BM_Simulate(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate(henon_pair(), BernoulliRule{{0.5, 0.5}, 1}, GenerateOptions{}));
  }
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

void BM_Diameters(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(nn_diameters(henon_cloud(), 0));
}
BENCHMARK(BM_Diameters)->Unit(benchmark::kMillisecond);

void BM_ComponentCounts(benchmark::State& state) {
  const auto workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(component_count_histogram(henon_cloud(), 5, 0.03, workers));
  }
}
BENCHMARK(BM_ComponentCounts)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_Separate(benchmark::State& state) {
  SeparationOptions o;
  o.workers = 0;
  o.screen = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(separate(henon_cloud(), 0.03, 2, o));
}
BENCHMARK(BM_Separate)->Arg(0)->Arg(1)->Unit(benchmark::kSecond)->Iterations(1);

void BM_GhostCandidates(benchmark::State& state) {
  const Surrogate s = synth_surrogate();
  const PointCloud c = delay_embed(s.series, {1, 3});
  for (auto _ : state) benchmark::DoNotOptimize(identify_candidates(c, 10, 30.0, {true, 0}));
}
BENCHMARK(BM_GhostCandidates)->Unit(benchmark::kMillisecond);

void BM_Fnn(benchmark::State& state) {
  const Surrogate s = synth_surrogate();
  for (auto _ : state) benchmark::DoNotOptimize(fnn_curve(s.clean, 1, 6));
}
BENCHMARK(BM_Fnn)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
