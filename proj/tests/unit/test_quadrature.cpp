#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mixbound/quadrature.hpp"

using namespace mixbound;
using std::numbers::pi;

TEST_CASE("adaptive rule on smooth and infinite ranges") {
  CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, pi) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_adaptive([](double x) { return std::exp(-x * x); }, -INFINITY, INFINITY) ==
        doctest::Approx(std::sqrt(pi)).epsilon(1e-10));
  CHECK(integrate_adaptive([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, INFINITY) ==
        doctest::Approx(pi / 2).epsilon(1e-10));
  double err = -1.0;
  (void)integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0, 1e-10, 15, &err);
  CHECK(err >= 0.0);
}

TEST_CASE("breakpoints handle kinks") {
  auto f = [](double x) { return std::exp(-std::abs(x - 0.3)) + std::exp(-std::abs(x + 0.7)); };
  const auto br = breakpoints({0.3, -0.7, 0.3, 9.0}, -5.0, 5.0);
  CHECK(br == std::vector<double>{-5.0, -0.7, 0.3, 5.0});
  const double exact = (2.0 - std::exp(-5.3) - std::exp(-4.7)) + (2.0 - std::exp(-4.3) - std::exp(-5.7));
  CHECK(integrate_adaptive(f, br, 1e-12) == doctest::Approx(exact).epsilon(1e-11));
}

TEST_CASE("composite Gauss-Legendre") {
  const auto x = legendre_nodes();
  const auto w = legendre_weights();
  REQUIRE(x.size() == 20);
  double total = 0.0;
  for (double v : w) total += v;
  CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
  for (int p = 0; p <= 39; ++p) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], p);
    CHECK(s == doctest::Approx(p % 2 ? 0.0 : 2.0 / (p + 1)).scale(1.0).epsilon(1e-13));
  }
  CHECK(integrate_composite([](double t) { return std::cos(t); }, 0.0, 10.0, 4) ==
        doctest::Approx(std::sin(10.0)).epsilon(1e-12));
  CHECK(integrate_composite([](double t) { return std::sqrt(t); }, 0.0, 1.0, 64) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-5));
}
