#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mixbound/error.hpp"
#include "mixbound/kernels.hpp"
#include "oracles.hpp"

using namespace mixbound;
using std::numbers::pi;

namespace {

const KernelKind kAll[] = {KernelKind::gaussian, KernelKind::gaussian_isotropic, KernelKind::cauchy,
                           KernelKind::laplace};

}  // namespace

TEST_CASE("kernel descriptors") {
  CHECK(KernelFamily(KernelKind::gaussian, 2).smoothness().kind == SmoothnessClass::Kind::super_smooth);
  CHECK(KernelFamily(KernelKind::gaussian, 2).smoothness().order == 2.0);
  CHECK(KernelFamily(KernelKind::cauchy, 1).smoothness().order == 1.0);
  CHECK(KernelFamily(KernelKind::laplace, 1).smoothness().kind == SmoothnessClass::Kind::ordinary_smooth);
  CHECK(KernelFamily(KernelKind::laplace, 1).xi_exponent() == 2.0);
  CHECK(KernelFamily(KernelKind::cauchy, 1).xi_exponent() == 1.0);
  CHECK(parse_kernel("gaussian-iso") == KernelKind::gaussian_isotropic);
  CHECK(to_string(KernelKind::laplace) == "laplace");
  for (auto kind : kAll) CHECK(parse_kernel(to_string(kind)) == kind);
  try {
    parse_kernel("student");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unsupported_kernel);
  }
  const ParameterSpace sp(2, 1.0, 0.5, 2.0);
  const double diag[] = {1.0, 1.5};
  CHECK_THROWS_AS(KernelFamily(KernelKind::gaussian_isotropic, 2).check_scale(SpdScale(Matrix::diagonal(diag), sp)),
                  Error);
  CHECK_NOTHROW(KernelFamily(KernelKind::gaussian, 2).check_scale(SpdScale(Matrix::diagonal(diag), sp)));
}

TEST_CASE("density modes") {
  const ParameterSpace sp(1, 1.0, 0.5, 2.0);
  const double zero[1] = {0.0};
  CHECK(density(KernelFamily(KernelKind::gaussian, 1), zero, zero, SpdScale::isotropic(1.0, sp)) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * pi)).epsilon(1e-14));
  CHECK(density(KernelFamily(KernelKind::cauchy, 1), zero, zero, SpdScale::isotropic(1.0, sp)) ==
        doctest::Approx(1.0 / pi).epsilon(1e-14));
  CHECK(density(KernelFamily(KernelKind::laplace, 1), zero, zero, SpdScale::isotropic(2.0, sp)) ==
        doctest::Approx(0.5).epsilon(1e-14));
  const double two[2] = {0.0, 0.0};
  CHECK_THROWS_AS(density(KernelFamily(KernelKind::gaussian, 1), two, zero, SpdScale::isotropic(1.0, sp)), Error);
  const ParameterSpace sp2(2, 1.0, 0.5, 2.0);
  CHECK(std::isfinite(density(KernelFamily(KernelKind::laplace, 2), two, two, SpdScale::isotropic(1.0, sp2))));
}

TEST_CASE("densities integrate to one") {
  CounterRng rng(8);
  for (std::size_t d : {1u, 2u})
    for (auto kind : kAll) {
      const ParameterSpace sp(d, 1.0, 0.5, 2.0);
      const KernelFamily k(kind, d);
      for (int t = 0; t < 5; ++t) {
        const SpdScale s = oracle::random_scale(sp, rng, kind == KernelKind::gaussian_isotropic);
        const Vector theta = rng.uniform_ball(d, sp.radius);
        const double box = sp.radius + 12.0 * std::sqrt(sp.lambda_max);
        const double mass = oracle::total_mass(k, theta, s, box);
        CAPTURE(to_string(kind));
        CAPTURE(d);
        CHECK(std::abs(mass - 1.0) <= (kind == KernelKind::cauchy ? 2e-2 : 1e-3));
      }
    }
}

TEST_CASE("characteristic function closed forms") {
  const ParameterSpace sp1(1, 1.0, 0.5, 2.0);
  const ParameterSpace sp2(2, 1.0, 0.5, 2.0);
  const double one[1] = {1.0};
  CHECK(charfn(KernelFamily(KernelKind::gaussian, 1), one, SpdScale::isotropic(1.0, sp1)) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  const double v34[2] = {3.0, 4.0};
  CHECK(charfn(KernelFamily(KernelKind::cauchy, 2), v34, SpdScale::isotropic(1.0, sp2)) ==
        doctest::Approx(std::exp(-5.0)).epsilon(1e-14));
  const double z[2] = {0.0, 0.0};
  CHECK(charfn(KernelFamily(KernelKind::laplace, 2), z, SpdScale::isotropic(1.3, sp2)) == 1.0);
}

TEST_CASE("characteristic function matches Fourier quadrature") {
  CounterRng rng(99);
  for (std::size_t d : {1u, 2u})
    for (auto kind : kAll) {
      const ParameterSpace sp(d, 1.0, 0.5, 2.0);
      const KernelFamily k(kind, d);
      for (int t = 0; t < 4; ++t) {
        const SpdScale s = oracle::random_scale(sp, rng, kind == KernelKind::gaussian_isotropic);
        Vector xi = rng.normal_vector(d);
        const double target = rng.uniform(0.5, 5.0) / norm(xi);
        for (auto& x : xi) x *= target;
        const double expect = oracle::fourier_transform(k, xi, s);
        CAPTURE(to_string(kind));
        CAPTURE(d);
        CHECK(std::abs(charfn(k, xi, s) - expect) <= (kind == KernelKind::cauchy ? 5e-3 : 1e-4));
      }
    }
}

TEST_CASE("characteristic function is even, real and bounded") {
  CounterRng rng(17);
  for (auto kind : kAll) {
    const ParameterSpace sp(3, 1.0, 0.5, 2.0);
    const KernelFamily k(kind, 3);
    for (int t = 0; t < 50; ++t) {
      const SpdScale s = oracle::random_scale(sp, rng, kind == KernelKind::gaussian_isotropic);
      Vector xi = rng.normal_vector(3);
      Vector minus = xi;
      for (auto& x : minus) x = -x;
      const double v = charfn(k, xi, s);
      CHECK(v == charfn(k, minus, s));
      CHECK(std::abs(v) <= 1.0);
    }
  }
}

TEST_CASE("smoothness envelopes bracket the transform") {
  const ParameterSpace sp(1, 1.0, 0.5, 2.0);
  const auto g0 = smoothness_envelope(KernelFamily(KernelKind::gaussian, 1), 0.0, sp);
  CHECK(g0.lower == 1.0);
  CHECK(g0.upper == 1.0);
  const auto g1 = smoothness_envelope(KernelFamily(KernelKind::gaussian, 1), 1.0, sp);
  CHECK(g1.lower == doctest::Approx(std::exp(-1.0)));
  CHECK(g1.lower <= std::exp(-0.5));
  CHECK(std::exp(-0.5) <= g1.upper);

  const auto lap = smoothness_envelope(KernelFamily(KernelKind::laplace, 1), 2.0, sp);
  CHECK(lap.lower <= 1.0 / 3.0);
  CHECK(1.0 / 3.0 <= lap.upper);

  CounterRng rng(4);
  for (std::size_t d : {1u, 2u, 3u})
    for (auto kind : kAll) {
      const ParameterSpace spd(d, 1.0, 0.5, 2.0);
      const KernelFamily k(kind, d);
      for (int t = 0; t < 100; ++t) {
        const SpdScale s = oracle::random_scale(spd, rng, kind == KernelKind::gaussian_isotropic);
        Vector xi = rng.normal_vector(d);
        for (auto& x : xi) x *= 2.0;
        const auto env = smoothness_envelope(k, norm(xi), spd);
        const double v = std::abs(charfn(k, xi, s));
        CHECK(env.lower <= v * (1.0 + 1e-12));
        CHECK(v <= env.upper * (1.0 + 1e-12));
      }
    }
}

TEST_CASE("psi and xi") {
  const KernelFamily gauss(KernelKind::gaussian, 1, 1.0);
  const KernelFamily cauchy(KernelKind::cauchy, 1);
  const KernelFamily laplace(KernelKind::laplace, 1);
  CHECK(psi(cauchy, 0.3) == doctest::Approx(0.09).epsilon(1e-14));
  CHECK(psi(laplace, 0.7) == 0.7);
  CHECK(psi(gauss, 0.5) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(psi(gauss, 1.0), Error);
  CHECK(xi(cauchy, 0.25) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(xi_inverse(cauchy, 0.5) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(xi(gauss, 0.8) == 0.8);
  CHECK_THROWS_AS(xi(gauss, -0.1), Error);
  for (const auto& k : {gauss, cauchy, laplace}) {
    double prev = 0.0;
    for (double t = 0.02; t < 0.99; t += 0.02) {
      const double v = psi(k, t);
      CHECK(v > prev);
      prev = v;
      CHECK(psi_inverse(k, v) == doctest::Approx(t).epsilon(1e-9));
      CHECK(xi_inverse(k, xi(k, t)) == doctest::Approx(t).epsilon(1e-12));
    }
  }
}

TEST_CASE("perturbation inequality on random triples") {
  CounterRng rng(31);
  for (auto kind : kAll)
    for (std::size_t d : {1u, 2u, 3u}) {
      const ParameterSpace sp(d, 1.0, 0.5, 2.0);
      const KernelFamily k(kind, d);
      for (int t = 0; t < 200; ++t) {
        const bool iso = kind == KernelKind::gaussian_isotropic;
        const SpdScale a = oracle::random_scale(sp, rng, iso);
        const SpdScale b = oracle::random_scale(sp, rng, iso);
        Vector xi = rng.normal_vector(d);
        for (auto& x : xi) x *= 1.5;
        const double fa = charfn(k, xi, a);
        const double fb = charfn(k, xi, b);
        const double rhs = k.perturbation_constant() * mixbound::xi(k, operator_norm_distance(a, b)) *
                           std::pow(norm(xi), k.xi_exponent()) * std::max(std::abs(fa), std::abs(fb));
        CHECK(std::abs(fa - fb) <= rhs * (1.0 + 1e-12) + 1e-300);
      }
    }
}

TEST_CASE("kernel sampler moments") {
  const ParameterSpace sp(1, 1.0, 0.5, 2.0);
  CounterRng rng(77);
  const double theta[1] = {0.3};
  for (auto kind : {KernelKind::gaussian, KernelKind::laplace}) {
    const KernelFamily k(kind, 1);
    const SpdScale s = SpdScale::isotropic(1.5, sp);
    double m = 0.0;
    double v = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double x = sample_kernel(k, theta, s, rng)[0];
      m += x;
      v += (x - 0.3) * (x - 0.3);
    }
    CHECK(m / n == doctest::Approx(0.3).epsilon(0.03));
    // Both parametrizations have variance equal to the scale.
    CHECK(v / n == doctest::Approx(1.5).epsilon(0.02));
  }
  const KernelFamily c(KernelKind::cauchy, 1);
  int below = 0;
  for (int i = 0; i < 100000; ++i) below += sample_kernel(c, theta, SpdScale::isotropic(1.0, sp), rng)[0] < 1.3;
  CHECK(below / 1e5 == doctest::Approx(0.75).epsilon(0.01));
}
