#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mixbound/kernels.hpp"
#include "mixbound/measures.hpp"

namespace mixbound {

using MultiIndex = std::vector<int>;

/// Constant-coefficient operator sum_nu c_nu d^nu, coefficients listed in
/// lexicographic order of nu over all |nu| <= order.
struct DifferentialOperatorSpec {
  std::size_t dim = 1;
  int order = 0;
  std::vector<MultiIndex> indices;
  std::vector<double> coefficients;

  double coefficient(const MultiIndex& nu) const;
};

/// Id - 1/2 sum_{j,k} S_jk d_j d_k, mixed partials stored once per unordered pair.
DifferentialOperatorSpec laplace_operator(const SpdScale& scale);

/// sum_nu c_nu (-i xi)^nu.
std::complex<double> char_poly(const DifferentialOperatorSpec& op, std::span<const double> xi);

/// Smooth compactly supported test function with analytic first and second derivatives.
class TestFunction {
 public:
  /// exp(-1/(1 - |y|^2)) with y = (x - centre) / radius.
  static TestFunction bump(Point centre, double radius);
  /// prod_i exp(-1/(1 - y_i^2)) with y_i = (x_i - centre_i) / radii_i.
  static TestFunction product_bump(Point centre, Vector radii);

  double value(std::span<const double> x) const;
  Vector gradient(std::span<const double> x) const;
  Matrix hessian(std::span<const double> x) const;

  const Point& centre() const noexcept { return centre_; }
  /// Radius of a ball about centre() containing the support.
  double support_radius() const noexcept;
  std::size_t dim() const noexcept { return centre_.size(); }
  const std::string& id() const noexcept { return id_; }

 private:
  enum class Shape { radial, product };
  TestFunction(Shape s, Point c, Vector r, std::string id);

  Shape shape_;
  Point centre_;
  Vector radii_;
  std::string id_;
};

/// Radial bumps at several centres and radii, products of 1-d bumps (d >= 2) and a
/// bump supported in the shell R + 1 < |x| < R + 2.
std::vector<TestFunction> standard_test_suite(const ParameterSpace& space);

/// Adjoint applied to phi: phi - 1/2 sum_{jk} S_jk d_jk phi.
double adjoint_apply(const SpdScale& scale, const TestFunction& phi, std::span<const double> x);

/// <p_G, T* phi> - sum_j w_j phi(theta_j) for the Laplace kernel. `budget`
/// caps the number of quadrature nodes.
double weak_residual(const MixtureConfig& g, const KernelFamily& k, const TestFunction& phi, std::uint64_t budget);

}  // namespace mixbound
