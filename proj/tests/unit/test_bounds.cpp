#include <cmath>

#include "doctest.h"
#include "mixbound/bounds.hpp"
#include "mixbound/error.hpp"

using namespace mixbound;

namespace {

const KernelFamily kGauss(KernelKind::gaussian, 1);
const KernelFamily kIso(KernelKind::gaussian_isotropic, 1);
const KernelFamily kCauchy(KernelKind::cauchy, 1);
const KernelFamily kLaplace(KernelKind::laplace, 1);

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::precondition;
}

}  // namespace

TEST_CASE("super-smooth bound") {
  const auto spec = BoundSpec::for_kernel(BoundRegime::super_smooth, kCauchy);
  CHECK(bound_supersmooth(spec, kCauchy, 1.0, 0.0) == doctest::Approx(std::exp(-4.0)).epsilon(1e-14));
  CHECK(bound_supersmooth(spec, kCauchy, 1.0, 0.1) == doctest::Approx(std::exp(-4.0) + 0.01).epsilon(1e-14));
  CHECK(bound_supersmooth(spec, kCauchy, 1e-3, 0.0) <= 1e-300);
  CHECK(bound_supersmooth(spec, kCauchy, 0.0, 0.2) == doctest::Approx(0.04));
  const auto gspec = BoundSpec::for_kernel(BoundRegime::super_smooth, kGauss);
  CHECK(kind_of([&] { bound_supersmooth(gspec, kGauss, 0.5, 1.5); }) == ErrorKind::domain);
  CHECK(kind_of([&] { bound_supersmooth(BoundSpec::for_kernel(BoundRegime::pde_inversion, kCauchy), kCauchy, 1.0, 0.0); }) ==
        ErrorKind::precondition);
}

TEST_CASE("ordinary-smooth bound") {
  const auto spec = BoundSpec::for_kernel(BoundRegime::ordinary_smooth, kLaplace);
  CHECK(bound_ordinary(spec, kLaplace, 0.5, 0.0) == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(bound_ordinary(spec, kLaplace, 1.0, 0.0) == 1.0);
  CHECK(bound_ordinary(spec, kLaplace, 0.5, 0.3) == doctest::Approx(0.3625).epsilon(1e-14));
}

TEST_CASE("PDE bound and its consistency with the Laplace row") {
  const auto spec = BoundSpec::for_kernel(BoundRegime::pde_inversion, kLaplace);
  CHECK(bound_pde(spec, kLaplace, 0.5, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(bound_pde(spec, kLaplace, 0.5, 0.1) == doctest::Approx(0.35).epsilon(1e-14));
  CHECK(bound_pde(spec, kLaplace, 0.0, 0.1) == doctest::Approx(0.1).epsilon(1e-14));
  for (double w = 0.0; w <= 2.0; w += 0.1)
    for (double s = 0.0; s <= 1.5; s += 0.1) CHECK(bound_pde(spec, kLaplace, w, s) == bound_kernel(kLaplace, w, s));
  auto bad = spec;
  bad.beta = 1.5;
  CHECK(kind_of([&] { bound_pde(bad, kLaplace, 0.5, 0.0); }) == ErrorKind::domain);
}

TEST_CASE("kernel-specific bounds") {
  CHECK(bound_kernel(kIso, 1.0, 0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(bound_kernel(kCauchy, 0.5, 0.2) == doctest::Approx(std::exp(-2.0) + 0.04).epsilon(1e-14));
  CHECK(bound_kernel(kLaplace, 0.3, 0.05) == doctest::Approx(0.14).epsilon(1e-14));
  CHECK(bound_kernel(kGauss, 1.0, 0.0) == doctest::Approx(std::exp(-std::exp(1.0))).epsilon(1e-14));
  CHECK(bound_kernel(kGauss, 1.0, 0.5) == doctest::Approx(std::exp(-std::exp(1.0)) + 0.25).epsilon(1e-14));
  CHECK(kind_of([&] { bound_kernel(kGauss, 1.0, 1.0); }) == ErrorKind::domain);
  CHECK(kind_of([&] { bound_kernel(kLaplace, -0.1, 0.0); }) == ErrorKind::domain);
}

TEST_CASE("bounds are monotone and vanish at the origin") {
  for (const auto& k : {kGauss, kIso, kCauchy, kLaplace}) {
    std::vector<std::pair<BoundRegime, bool>> regimes{{BoundRegime::kernel_specific, true}};
    if (k.smoothness().kind == SmoothnessClass::Kind::super_smooth)
      regimes.push_back({BoundRegime::super_smooth, true});
    else
      regimes.push_back({BoundRegime::ordinary_smooth, true});
    if (k.kind == KernelKind::laplace) regimes.push_back({BoundRegime::pde_inversion, true});
    for (auto [regime, unused] : regimes) {
      (void)unused;
      const auto spec = BoundSpec::for_kernel(regime, k);
      auto eval = [&](double w, double s) {
        switch (regime) {
          case BoundRegime::super_smooth: return bound_supersmooth(spec, k, w, s);
          case BoundRegime::ordinary_smooth: return bound_ordinary(spec, k, w, s);
          case BoundRegime::pde_inversion: return bound_pde(spec, k, w, s);
          default: return bound_kernel(k, w, s);
        }
      };
      for (double w = 0.0; w <= 2.0; w += 0.05)
        for (double s = 0.0; s < 0.95; s += 0.05) {
          CHECK(eval(w, s) <= eval(w + 0.05, s));
          CHECK(eval(w, s) <= eval(w, s + 0.05));
        }
      CHECK(eval(0.0, 0.0) == 0.0);
      CHECK(eval(1e-3, 1e-4) <= 1e-3);
    }
  }
}

TEST_CASE("theoretical rates") {
  CHECK(theoretical_rate(kLaplace, 10000).w1 == doctest::Approx(std::pow(10.0, -0.5) * std::pow(std::log(1e4), 0.625)));
  CHECK(theoretical_rate(kLaplace, 10000).w1 == doctest::Approx(1.2666).epsilon(1e-4));
  CHECK(theoretical_rate(kIso, 15).w1 == doctest::Approx(0.6076).epsilon(1e-3));
  const auto g = theoretical_rate(KernelFamily(KernelKind::gaussian, 2), 1000);
  const double ln = std::log(1000.0);
  CHECK(g.l1 == doctest::Approx(std::pow(1000.0, -0.5) * std::pow(ln, 1.5)));
  CHECK(g.w1 == doctest::Approx(1.0 / std::sqrt(std::log(ln))));
  CHECK(g.sigma == doctest::Approx(std::log(ln) / ln));
  CHECK(kind_of([&] { theoretical_rate(kCauchy, 100); }) == ErrorKind::no_known_rate);
  CHECK(kind_of([&] { theoretical_rate(KernelFamily(KernelKind::laplace, 2), 100); }) == ErrorKind::no_known_rate);
}

TEST_CASE("fuzz rejects identical pairs") {
  const ParameterSpace sp(1, 1.0, 0.5, 2.0);
  std::uint64_t calls = 0;
  const auto report = fuzz_inverse_bound(kLaplace, sp, 1, 20000, 3, [&](CounterRng& rng) {
    const MixtureConfig g = sample_admissible(kLaplace, sp, 2, rng);
    if (calls++ == 0) return MixturePair{g, g};
    return MixturePair{g, sample_admissible(kLaplace, sp, 2, rng)};
  });
  CHECK(report.rejections == 1);
  CHECK(report.trials == 1);
  CHECK(report.records.size() == 1);
  CHECK(report.min_ratio > 0.0);
}

TEST_CASE("fuzz report is reproducible and positive") {
  const ParameterSpace sp(1, 1.0, 0.5, 2.0);
  for (const auto& k : {kIso, kCauchy, kLaplace}) {
    const auto a = fuzz_inverse_bound(k, sp, 20, 3, 20000, 1);
    const auto b = fuzz_inverse_bound(k, sp, 20, 3, 20000, 1);
    CHECK(a.min_ratio == b.min_ratio);
    CHECK(a.min_ratio > 0.0);
    CHECK(a.violations == 0);
    CHECK(a.fitted_constant == a.min_ratio);
    CHECK(a.argmin_pair.contains("G"));
    for (const auto& r : a.records) {
      CHECK(r.ratio >= a.min_ratio);
      CHECK(r.l1 >= 0.0);
    }
  }
}

TEST_CASE("profiles and slopes") {
  const double xs[] = {0.0, 1.0, 2.0, 3.0};
  const double ys[] = {1.0, 3.0, 5.0, 7.0};
  CHECK(ls_slope(xs, ys) == doctest::Approx(2.0));
  const ParameterSpace sp(1, 1.0, 0.5, 2.0);
  const MixtureConfig g(DiscreteMeasure({{-0.3}, {0.4}}, {0.5, 0.5}, sp), SpdScale::isotropic(1.0, sp), sp);
  const double steps[] = {0.2, 0.1, 0.05};
  const double unit[] = {1.0};
  const auto loc = location_only_profile(kLaplace, g, unit, steps, 20000);
  double prev = INFINITY;
  for (const auto& p : loc) {
    CHECK(p.l1 < prev);
    prev = p.l1;
    CHECK(p.l1 / bound_kernel(kLaplace, p.step, 0.0) >= 1.0);
  }
  const double grid[] = {0.01, 0.02, 0.05, 0.1, 0.2, 0.3};
  const auto scale = scale_only_profile(kLaplace, g, Matrix::identity(1), grid, 20000);
  CHECK(loglog_slope(scale) == doctest::Approx(1.0).epsilon(0.05));
}
