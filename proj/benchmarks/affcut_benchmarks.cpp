#include <benchmark/benchmark.h>

#include <random>

#include "affcut/cascade.hpp"
#include "affcut/gaec.hpp"
#include "affcut/oracle.hpp"
#include "affcut/partition.hpp"
#include "affcut/synth.hpp"

namespace affcut {
namespace {

// GAEC on an n x n grid graph with uniform random affinities.
void BM_GaecGrid(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> affinity(0.0, 1.0);
  std::vector<WeightedEdge> edges;
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t v = y * n + x;
      if (x + 1 < n) edges.push_back({v, v + 1, affinity(rng)});
      if (y + 1 < n) edges.push_back({v, v + n, affinity(rng)});
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(gaec_partition(n * n, edges, 0.5));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}
BENCHMARK(BM_GaecGrid)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Partition(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  SceneSpec spec = moderate_noise_spec({side, side}, 0);
  spec.with_full_resolution_truth = false;
  const SyntheticScene scene = generate_scene(spec);
  PartitionOptions options;
  options.cascade.use_gas = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(partition(scene.pyramid, options));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * side * side));
}
BENCHMARK(BM_Partition)->ArgsProduct({{256, 512, 1024}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_ExactMulticut(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> cost(0.0, 1.0);
  std::vector<WeightedEdge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) edges.push_back({u, v, cost(rng)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(exact_multicut(n, edges));
}
BENCHMARK(BM_ExactMulticut)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace affcut

BENCHMARK_MAIN();
