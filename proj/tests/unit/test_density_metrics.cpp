#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "mixbound/density_metrics.hpp"
#include "mixbound/error.hpp"
#include "mixbound/transport.hpp"
#include "oracles.hpp"

using namespace mixbound;
using std::numbers::pi;

namespace {

const ParameterSpace kLine(1, 1.0, 0.5, 2.0);

MixtureConfig line_mixture(std::vector<double> atoms, std::vector<double> w, double s2,
                           const ParameterSpace& sp = kLine) {
  std::vector<Point> pts;
  for (double a : atoms) pts.push_back({a});
  return {DiscreteMeasure(pts, w, sp), SpdScale::isotropic(s2, sp), sp};
}

double phi_std(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("mixture density") {
  const KernelFamily k(KernelKind::gaussian, 1);
  const double zero[1] = {0.0};
  CHECK(mixture_density(line_mixture({0.0}, {1.0}, 1.0), k, zero) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * pi)).epsilon(1e-14));
  CHECK(mixture_density(line_mixture({-1.0, 1.0}, {0.5, 0.5}, 1.0), k, zero) ==
        doctest::Approx(std::exp(-0.5) / std::sqrt(2.0 * pi)).epsilon(1e-14));
  const double x[1] = {0.37};
  CHECK(mixture_density(line_mixture({0.2, -0.9}, {1.0, 0.0}, 1.3), k, x) ==
        mixture_density(line_mixture({0.2}, {1.0}, 1.3), k, x));
  const double two[2] = {0.0, 0.0};
  CHECK_THROWS_AS(mixture_density(line_mixture({0.0}, {1.0}, 1.0), k, two), Error);
}

TEST_CASE("l1 distance closed forms") {
  const KernelFamily k(KernelKind::gaussian, 1);
  const auto g = line_mixture({0.3, -0.6}, {0.4, 0.6}, 1.2);
  CHECK(l1_distance(g, g, k, 20000, 1).value <= 1e-10);

  const ParameterSpace wide(1, 10.0, 0.5, 2.0);
  const auto left = line_mixture({-10.0}, {1.0}, 1.0, wide);
  const auto right = line_mixture({10.0}, {1.0}, 1.0, wide);
  CHECK(std::abs(l1_distance(left, right, k, 20000, 1).value - 2.0) <= 1e-6);

  const auto a = line_mixture({0.0}, {1.0}, 1.0);
  const auto b = line_mixture({1.0}, {1.0}, 1.0);
  const double expect = 2.0 * (2.0 * phi_std(0.5) - 1.0);
  const auto est = l1_distance(a, b, k, 20000, 1);
  CHECK(est.value == doctest::Approx(expect).epsilon(1e-8));
  CHECK(est.method == L1Estimate::Method::quadrature);
  CHECK(est.std_error == 0.0);

  try {
    l1_distance(a, b, k, 999, 1);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::insufficient_budget);
  }
}

TEST_CASE("l1 distance symmetric and triangle") {
  CounterRng rng(12);
  for (auto kind : {KernelKind::gaussian, KernelKind::cauchy, KernelKind::laplace})
    for (std::size_t d : {1u, 2u}) {
      if (kind == KernelKind::laplace && d == 2) continue;
      const ParameterSpace sp(d, 1.0, 0.5, 2.0);
      const KernelFamily k(kind, d);
      for (int t = 0; t < 3; ++t) {
        const MixtureConfig a(oracle::random_measure(sp, 3, rng), oracle::random_scale(sp, rng), sp);
        const MixtureConfig b(oracle::random_measure(sp, 2, rng), oracle::random_scale(sp, rng), sp);
        const MixtureConfig c(oracle::random_measure(sp, 2, rng), oracle::random_scale(sp, rng), sp);
        const double ab = l1_distance(a, b, k, 200000, 1).value;
        const double ba = l1_distance(b, a, k, 200000, 1).value;
        const double bc = l1_distance(b, c, k, 200000, 1).value;
        const double ac = l1_distance(a, c, k, 200000, 1).value;
        CAPTURE(to_string(kind));
        CAPTURE(d);
        CHECK(std::abs(ab - ba) <= 1e-4);
        CHECK(ac <= ab + bc + 3e-4);
        CHECK(ab >= 0.0);
        CHECK(ab <= 2.0);
      }
    }
}

TEST_CASE("importance sampling agrees with quadrature in the plane") {
  CounterRng rng(5);
  const ParameterSpace sp(2, 1.0, 0.5, 2.0);
  const KernelFamily k(KernelKind::gaussian, 2);
  int agree = 0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    const MixtureConfig a(oracle::random_measure(sp, 2, rng), oracle::random_scale(sp, rng), sp);
    const MixtureConfig b(oracle::random_measure(sp, 2, rng), oracle::random_scale(sp, rng), sp);
    const auto q = l1_distance(a, b, k, 200000, 1, L1Method::quadrature);
    const auto m = l1_distance(a, b, k, 20000, 100 + t, L1Method::importance_mc);
    CHECK(m.std_error > 0.0);
    agree += std::abs(q.value - m.value) <= 3.0 * m.std_error;
  }
  CHECK(agree >= 0.9 * trials);
}

TEST_CASE("importance sampling in three dimensions") {
  const ParameterSpace sp(3, 1.0, 0.5, 2.0);
  const KernelFamily k(KernelKind::gaussian, 3);
  const MixtureConfig a(DiscreteMeasure::dirac({0.0, 0.0, 0.0}, sp), SpdScale::isotropic(1.0, sp), sp);
  const MixtureConfig b(DiscreteMeasure::dirac({1.0, 0.0, 0.0}, sp), SpdScale::isotropic(1.0, sp), sp);
  const auto est = l1_distance(a, b, k, 100000, 3);
  CHECK(est.method == L1Estimate::Method::importance_mc);
  // Shifting a standard normal along one axis reduces to the univariate case.
  const double expect = 2.0 * (2.0 * phi_std(0.5) - 1.0);
  CHECK(std::abs(est.value - expect) <= 4.0 * est.std_error);
  CHECK(l1_distance(a, b, k, 100000, 3).value == est.value);
}

TEST_CASE("forward continuity along a shrinking perturbation") {
  const KernelFamily k(KernelKind::laplace, 1);
  const auto base = line_mixture({-0.4, 0.5}, {0.5, 0.5}, 1.0);
  double prev = INFINITY;
  double first_ratio = 0.0;
  for (double t : {0.2, 0.1, 0.05, 0.025}) {
    const auto moved = line_mixture({-0.4 + t / 2, 0.5 + t / 2}, {0.5, 0.5}, 1.0 + t / 2);
    const double c = product_w1(base, moved);
    CHECK(c == doctest::Approx(t));
    const double l1 = l1_distance(base, moved, k, 20000, 1).value;
    CHECK(l1 < prev);
    prev = l1;
    if (first_ratio == 0.0) first_ratio = l1 / t;
    CHECK(l1 / t <= 10.0 * first_ratio);
  }
}

TEST_CASE("mixture characteristic function") {
  const KernelFamily k(KernelKind::gaussian, 1);
  const auto g = line_mixture({-0.5, 0.2, 0.9}, {0.2, 0.5, 0.3}, 0.8);
  const double zero[1] = {0.0};
  CHECK(std::abs(mixture_charfn(g, k, zero) - 1.0) <= 1e-15);
  const auto dirac = line_mixture({0.0}, {1.0}, 1.4);
  const double xi[1] = {1.7};
  CHECK(mixture_charfn(dirac, k, xi) == std::complex<double>(charfn(k, xi, dirac.scale), 0.0));

  for (double w : {0.3, 1.1, 2.5}) {
    auto re = [&](double x) {
      const double pt[1] = {x};
      return mixture_density(g, k, pt) * std::cos(w * x);
    };
    auto im = [&](double x) {
      const double pt[1] = {x};
      return mixture_density(g, k, pt) * std::sin(w * x);
    };
    const std::complex<double> expect(oracle::simpson(re, -20.0, 20.0, 40000), oracle::simpson(im, -20.0, 20.0, 40000));
    const double v[1] = {w};
    CHECK(std::abs(mixture_charfn(g, k, v) - expect) <= 1e-4);
  }
}

TEST_CASE("hermite moment functional") {
  CHECK(hermite_moment_functional(1, 1.0, line_mixture({0.5}, {1.0}, 1.0)) == doctest::Approx(0.25).epsilon(1e-5));
  CHECK(std::abs(hermite_moment_functional(2, 1.0, line_mixture({0.0}, {1.0}, 1.0))) <= 1e-5);
  CHECK(hermite_moment_functional(1, 1.0, line_mixture({-1.0, 1.0}, {0.5, 0.5}, 1.0)) ==
        doctest::Approx(1.0).epsilon(1e-5));
  const auto g = line_mixture({-0.7, 0.1, 0.8}, {0.3, 0.3, 0.4}, 1.6);
  for (int k = 1; k <= 5; ++k) {
    double expect = 0.0;
    for (std::size_t j = 0; j < 3; ++j) expect += g.mixing.weight(j) * std::pow(g.mixing.atom(j)[0], 2 * k);
    CHECK(hermite_moment_functional(k, 1.6, g) == doctest::Approx(expect).epsilon(1e-5));
  }
  // Direct check of the polynomial against E[(x + i sigma Z)^2] = x^2 - sigma^2.
  CHECK(hermite_even(1, 2.0, 3.0) == doctest::Approx(7.0));
  const ParameterSpace plane(2, 1.0, 0.5, 2.0);
  const MixtureConfig g2(DiscreteMeasure::dirac({0.0, 0.0}, plane), SpdScale::isotropic(1.0, plane), plane);
  try {
    hermite_moment_functional(1, 1.0, g2);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unsupported_dimension);
  }
}
