#pragma once

#include <span>
#include <string>
#include <string_view>

#include "mixbound/measures.hpp"
#include "mixbound/random.hpp"

namespace mixbound {

enum class KernelKind { gaussian, gaussian_isotropic, cauchy, laplace };

struct SmoothnessClass {
  enum class Kind { super_smooth, ordinary_smooth };
  Kind kind;
  double order;
};

struct Envelope {
  double lower;
  double upper;
};

/// Kernel descriptor. `bound_constant_M` only enters the Gaussian Psi.
struct KernelFamily {
  KernelKind kind = KernelKind::gaussian;
  std::size_t dim = 1;
  double bound_constant_M = 1.0;

  KernelFamily() = default;
  KernelFamily(KernelKind k, std::size_t d, double M = 1.0);

  SmoothnessClass smoothness() const noexcept;
  double xi_exponent() const noexcept;
  bool is_gaussian() const noexcept { return kind == KernelKind::gaussian || kind == KernelKind::gaussian_isotropic; }
  /// Constant C in |Phi_S' - Phi_S| <= C Xi(|S - S'|) |xi|^p max(|Phi_S|, |Phi_S'|).
  double perturbation_constant() const noexcept;
  /// Throws if the scale is not admissible for this family (isotropic check, dimension).
  void check_scale(const SpdScale& scale) const;
};

KernelKind parse_kernel(std::string_view name);
std::string_view to_string(KernelKind kind) noexcept;

double density(const KernelFamily& k, std::span<const double> x, std::span<const double> theta, const SpdScale& scale);
/// Kernel density as a function of the squared Mahalanobis radius q = (x-theta)' S^{-1} (x-theta).
double density_radial(const KernelFamily& k, double q, double det_scale);

/// Characteristic function at xi of the kernel centred at 0; real for all families.
double charfn(const KernelFamily& k, std::span<const double> xi, const SpdScale& scale);

Envelope smoothness_envelope(const KernelFamily& k, double xi_norm, const ParameterSpace& space);

double psi(const KernelFamily& k, double t);
double psi_inverse(const KernelFamily& k, double s);
double xi(const KernelFamily& k, double t);
double xi_inverse(const KernelFamily& k, double s);

/// One draw from f(. | theta, scale).
Vector sample_kernel(const KernelFamily& k, std::span<const double> theta, const SpdScale& scale, CounterRng& rng);

}  // namespace mixbound
