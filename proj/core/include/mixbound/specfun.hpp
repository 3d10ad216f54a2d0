#pragma once

#include <complex>
#include <cstdint>

namespace mixbound {

double gamma_fn(double x);

/// Modified Bessel function of the second kind; symmetric in nu.
double bessel_k(double nu, double x);

/// Integral of |xi|^p over the closed ball of radius R in R^d.
double ball_moment_integral(int d, double p, double R);

/// (2k-1)!! with (-1)!! = 1; log variant avoids overflow for large k.
double double_factorial_odd(int k);
double log_double_factorial_odd(int k);

struct TailBound {
  enum class Kind { order_zero, order_2k };
  double value = 0.0;
  Kind kind = Kind::order_zero;
};

/// Upper bound for the Gaussian tail integral of |x|^{2k} e^{-x^2/(2 sigma^2)} beyond L
/// (shifted by a location of magnitude at most R when k >= 1).
TailBound gaussian_tail_bound(double sigma, double R, double L, int k);

/// M with u^p <= M e^{eps u} for all u > 0.
double poly_exp_constant(double p, double eps);

/// Lower bound on any y with x <= M y log y; requires x >= e^{1/M}.
double inverse_xlogx_bound(double x, double M);

/// Monte-Carlo estimate of E[(X + iY)^n] for independent standard normals.
std::complex<double> gaussian_complex_moment(int n, std::uint64_t samples, std::uint64_t seed);

}  // namespace mixbound
