#include <benchmark/benchmark.h>

#include <random>

#include "mfchaos/kernels.hpp"
#include "mfchaos/ot.hpp"
#include "mfchaos/simulator.hpp"

using namespace mfchaos;

namespace {

PointCloud random_cloud(std::size_t d, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> n;
  std::vector<double> c(d * m);
  for (auto& x : c) x = n(g);
  return PointCloud(d, std::move(c));
}

void BM_Assignment(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto a = random_cloud(2, m, 1), b = random_cloud(2, m, 2);
  for (auto _ : state) benchmark::DoNotOptimize(exact_w2_assignment(a, b).cost);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Assignment)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void BM_Sorted1D(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto a = random_cloud(1, m, 1), b = random_cloud(1, m, 2);
  for (auto _ : state) benchmark::DoNotOptimize(exact_w2_assignment(a, b).cost);
}
BENCHMARK(BM_Sorted1D)->Range(1024, 1 << 16);

void BM_Sinkhorn(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto a = WeightedCloud::uniform(random_cloud(2, m, 1));
  const auto b = WeightedCloud::uniform(random_cloud(2, m, 2));
  for (auto _ : state) benchmark::DoNotOptimize(sinkhorn_w2(a, b, 0.05, 5000, 1e-7).cost);
}
BENCHMARK(BM_Sinkhorn)->Range(64, 512);

void BM_ParticleStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DiscreteLevyMeasure om(1, {{Vec::Constant(1, 0.5), 1.0}, {Vec::Constant(1, -0.3), 2.0}});
  const MeanFieldModel m(1, AverageForm{kernels::linear_attraction(1.0), kernels::constant_sigma(1, 0.5),
                                        kernels::linear_eta(1, 1.0, 0.0)},
                         om);
  ParticleState s{0.0, random_cloud(1, n, 3), std::nullopt};
  std::uint64_t k = 0;
  for (auto _ : state) {
    const auto noise = draw_noise(7, 0, n, 1, k++, 1e-3, m.base_jump(), true);
    s = step(s, m, 1e-3, noise);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_ParticleStep)->Range(64, 4096);

}  // namespace
BENCHMARK_MAIN();
