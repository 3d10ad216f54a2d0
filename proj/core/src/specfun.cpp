#include "mixbound/specfun.hpp"

#include <cmath>
#include <numbers>

#include "mixbound/error.hpp"
#include "mixbound/random.hpp"

namespace mixbound {

double gamma_fn(double x) {
  require(x > 0.0, ErrorKind::domain, "gamma_fn needs x > 0");
  return std::tgamma(x);
}

double bessel_k(double nu, double x) {
  require(x > 0.0, ErrorKind::domain, "bessel_k needs x > 0");
  nu = std::abs(nu);
  if (nu == 0.5) return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
  if (nu == 1.5) return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) * (1.0 + 1.0 / x);
  return std::cyl_bessel_k(nu, x);
}

double ball_moment_integral(int d, double p, double R) {
  require(d >= 1, ErrorKind::domain, "dimension must be positive");
  require(p >= 0.0, ErrorKind::domain, "moment order must be nonnegative");
  require(R > 0.0, ErrorKind::domain, "radius must be positive");
  const double half = 0.5 * d;
  const double sphere = 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
  return sphere / (d + p) * std::pow(R, d + p);
}

double log_double_factorial_odd(int k) {
  // (2k-1)!! = (2k)! / (2^k k!)
  if (k <= 0) return 0.0;
  return std::lgamma(2.0 * k + 1.0) - k * std::log(2.0) - std::lgamma(k + 1.0);
}

double double_factorial_odd(int k) {
  if (k > 20) return std::exp(log_double_factorial_odd(k));
  double v = 1.0;
  for (int j = 1; j <= k; ++j) v *= 2.0 * j - 1.0;
  return v;
}

TailBound gaussian_tail_bound(double sigma, double R, double L, int k) {
  require(sigma > 0.0 && L > 0.0, ErrorKind::domain, "tail bound needs sigma > 0 and L > 0");
  require(k >= 0, ErrorKind::domain, "tail bound order must be nonnegative");
  const double base = std::sqrt(std::numbers::pi / 2.0) * sigma * std::exp(-L * L / (2.0 * sigma * sigma));
  if (k == 0) return {base, TailBound::Kind::order_zero};
  const double two_k = 2.0 * k;
  if (k <= 20) {
    const double poly = std::pow(std::abs(R), two_k) + std::pow(L, two_k) + std::pow(sigma, two_k) * double_factorial_odd(k);
    return {std::pow(3.0, two_k - 1.0) * base * poly, TailBound::Kind::order_2k};
  }
  // log-sum-exp of the three polynomial terms
  const double a = R == 0.0 ? -INFINITY : two_k * std::log(std::abs(R));
  const double b = two_k * std::log(L);
  const double c = two_k * std::log(sigma) + log_double_factorial_odd(k);
  const double m = std::max({a, b, c});
  const double log_poly = m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
  return {std::exp((two_k - 1.0) * std::log(3.0) + std::log(base) + log_poly), TailBound::Kind::order_2k};
}

double poly_exp_constant(double p, double eps) {
  require(eps > 0.0, ErrorKind::domain, "eps must be positive");
  require(p >= 0.0, ErrorKind::domain, "p must be nonnegative");
  const double k = std::ceil(p);
  return std::max(1.0, std::tgamma(k + 1.0) / std::pow(eps, k));
}

double inverse_xlogx_bound(double x, double M) {
  require(M > 0.0, ErrorKind::domain, "M must be positive");
  require(x >= std::exp(1.0 / M), ErrorKind::domain, "x must be at least e^{1/M}");
  return x / (M * std::log(x));
}

std::complex<double> gaussian_complex_moment(int n, std::uint64_t samples, std::uint64_t seed) {
  require(n >= 1 && samples >= 1, ErrorKind::domain, "need n >= 1 and samples >= 1");
  CounterRng rng(seed);
  std::complex<double> sum{0.0, 0.0};
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double x = rng.normal();
    const double y = rng.normal();
    sum += std::pow(std::complex<double>(x, y), n);
  }
  return sum / static_cast<double>(samples);
}

}  // namespace mixbound
