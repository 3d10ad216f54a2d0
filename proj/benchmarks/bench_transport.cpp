#include <benchmark/benchmark.h>

#include "mixbound/random.hpp"
#include "mixbound/transport.hpp"

using namespace mixbound;

namespace {

DiscreteMeasure random_measure(const ParameterSpace& sp, std::size_t n, CounterRng& rng) {
  std::vector<Point> atoms;
  std::vector<double> w;
  for (std::size_t i = 0; i < n; ++i) {
    atoms.push_back(rng.uniform_ball(sp.dim, sp.radius));
    w.push_back(rng.exponential());
  }
  return DiscreteMeasure(std::move(atoms), std::move(w), sp);
}

void BM_W1Exact(benchmark::State& state) {
  const ParameterSpace sp(static_cast<std::size_t>(state.range(1)), 1.0, 0.5, 2.0);
  CounterRng rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = random_measure(sp, n, rng), q = random_measure(sp, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(w1_exact(p, q).cost);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_W1Exact)->ArgsProduct({{4, 16, 64, 128}, {1, 3}})->Unit(benchmark::kMicrosecond);

void BM_W1Line(benchmark::State& state) {
  const ParameterSpace sp(1, 1.0, 0.5, 2.0);
  CounterRng rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = random_measure(sp, n, rng), q = random_measure(sp, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(w1_1d(p, q));
}
BENCHMARK(BM_W1Line)->RangeMultiplier(8)->Range(8, 4096)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
