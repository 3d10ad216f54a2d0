#pragma once

#include <complex>
#include <cstdint>
#include <span>

#include "mixbound/kernels.hpp"
#include "mixbound/measures.hpp"

namespace mixbound {

struct L1Estimate {
  enum class Method { quadrature, importance_mc };
  double value = 0.0;
  double std_error = 0.0;
  Method method = Method::quadrature;
  std::uint64_t budget = 0;
};

enum class L1Method { automatic, quadrature, importance_mc };

std::string_view to_string(L1Estimate::Method m) noexcept;

/// p_G with the scale inverse and determinant hoisted out of the per-point loop.
class MixtureDensity {
 public:
  MixtureDensity(const MixtureConfig& g, const KernelFamily& k);
  double operator()(std::span<const double> x) const;
  std::size_t dim() const noexcept { return kernel_.dim; }

 private:
  KernelFamily kernel_;
  std::vector<Point> atoms_;
  std::vector<double> weights_;
  Matrix inverse_;
  double det_;
};

double mixture_density(const MixtureConfig& g, const KernelFamily& k, std::span<const double> x);

/// Integral of |p_G - p_G'|. Default method: quadrature for d <= 2, importance
/// sampling with proposal (p_G + p_G')/2 for d >= 3. `budget` is the evaluation
/// cap for quadrature and the sample count for importance sampling.
L1Estimate l1_distance(const MixtureConfig& g, const MixtureConfig& gp, const KernelFamily& k, std::uint64_t budget,
                       std::uint64_t seed, L1Method method = L1Method::automatic);

/// (sum_j w_j e^{i xi.theta_j}) * Phi_S(xi).
std::complex<double> mixture_charfn(const MixtureConfig& g, const KernelFamily& k, std::span<const double> xi);

/// H_{2k}(x; sigma2) = E[(x + i sigma Z)^{2k}], Z standard normal.
double hermite_even(int k, double sigma2, double x);

/// Integral of H_{2k}(x; sigma2) p_G(x) dx for a univariate Gaussian mixture.
double hermite_moment_functional(int k, double sigma2, const MixtureConfig& g);

}  // namespace mixbound
