#include <benchmark/benchmark.h>

#include <random>

#include "ifsr/geometry.hpp"
#include "ifsr/ifs.hpp"

using namespace ifsr;

namespace {

const PointCloud& henon_cloud() {
  static const PointCloud c =
      generate(henon_pair(), BernoulliRule{{0.5, 0.5}, 1}, GenerateOptions{}).cloud;
  return c;
}

PointCloud uniform_cloud(std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(n * dim);
  for (double& x : xs) x = u(rng);
  return PointCloud(dim, std::move(xs));
}

void BM_KnnTree(benchmark::State& state) {
  const PointCloud& c = henon_cloud();
  const NeighborSearch search(c);
  const auto k = static_cast<std::size_t>(state.range(0));
  Index t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(search.knn(t, k));
    t = (t + 7919) % c.size();
  }
}
BENCHMARK(BM_KnnTree)->Arg(5)->Arg(40);

void BM_KnnBrute(benchmark::State& state) {
  const PointCloud& c = henon_cloud();
  Index t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(knn(c, t, 40));
    t = (t + 7919) % c.size();
  }
}
BENCHMARK(BM_KnnBrute);

void BM_TreeBuild(benchmark::State& state) {
  const PointCloud c = uniform_cloud(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    NeighborSearch search(c);
    benchmark::DoNotOptimize(&search);
  }
}
BENCHMARK(BM_TreeBuild)->Arg(10000)->Arg(30000);

void BM_EpsilonComponents(benchmark::State& state) {
  const PointCloud c = uniform_cloud(static_cast<std::size_t>(state.range(0)), 2);
  IndexSet all(c.size());
  for (Index i = 0; i < all.size(); ++i) all[i] = i;
  for (auto _ : state) benchmark::DoNotOptimize(epsilon_components(c, all, 0.05));
}
BENCHMARK(BM_EpsilonComponents)->Arg(40)->Arg(1000)->Arg(10000);

void BM_FarthestPoints(benchmark::State& state) {
  const PointCloud& c = henon_cloud();
  for (auto _ : state) {
    benchmark::DoNotOptimize(farthest_point_sample(c, 10000, 0, static_cast<unsigned>(state.range(0))));
  }
}
BENCHMARK(BM_FarthestPoints)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
