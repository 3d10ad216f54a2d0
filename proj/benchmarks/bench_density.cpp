#include <benchmark/benchmark.h>

#include "mixbound/density_metrics.hpp"
#include "mixbound/dual_witness.hpp"

using namespace mixbound;

namespace {

MixtureConfig pair_member(const ParameterSpace& sp, double shift, double sigma2) {
  Point a(sp.dim, 0.0), b(sp.dim, 0.0);
  a[0] = -0.4 + shift;
  b[0] = 0.3;
  return MixtureConfig(DiscreteMeasure({a, b}, {0.6, 0.4}, sp), SpdScale::isotropic(sigma2, sp), sp);
}

void BM_L1(benchmark::State& state) {
  const auto kind = static_cast<KernelKind>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const ParameterSpace sp(d, 1.0, 0.5, 2.0);
  const KernelFamily k(kind, d);
  const auto g = pair_member(sp, 0.0, 1.0), h = pair_member(sp, 0.1, 1.2);
  const auto method = d <= 2 ? L1Method::quadrature : L1Method::importance_mc;
  for (auto _ : state) benchmark::DoNotOptimize(l1_distance(g, h, k, 20000, 1, method).value);
  state.SetLabel(std::string(to_string(kind)) + " d=" + std::to_string(d));
}
BENCHMARK(BM_L1)
    ->ArgsProduct({{static_cast<long>(KernelKind::gaussian), static_cast<long>(KernelKind::cauchy),
                    static_cast<long>(KernelKind::laplace)},
                   {1, 2, 3}})
    ->Unit(benchmark::kMillisecond);

void BM_Bandlimit(benchmark::State& state) {
  const ParameterSpace sp(1, 1.0, 0.5, 2.0);
  const DiscreteMeasure p({{-0.5}, {0.2}, {0.7}}, {0.3, 0.3, 0.4}, sp), q({{0.0}, {0.9}}, {0.5, 0.5}, sp);
  const auto w = witness_from_transport(p, q);
  const double lambda = static_cast<double>(state.range(0));
  const double x[1] = {0.35};
  for (auto _ : state) benchmark::DoNotOptimize(bandlimit(w, sp, lambda, x));
}
BENCHMARK(BM_Bandlimit)->Arg(5)->Arg(20)->Unit(benchmark::kMicrosecond);

}  // namespace
