#include "mixbound/kernels.hpp"

#include <cmath>
#include <numbers>

#include "mixbound/error.hpp"
#include "mixbound/specfun.hpp"

namespace mixbound {

namespace {

constexpr double kMinRadius2 = 1e-16;  // ||x - theta||_S >= 1e-8

double two_pi_pow(std::size_t d) { return std::pow(2.0 * std::numbers::pi, 0.5 * static_cast<double>(d)); }

void require_dim(std::size_t want, std::size_t got) {
  require(want == got, ErrorKind::shape, "expected dimension " + std::to_string(want) + ", got " + std::to_string(got));
}

}  // namespace

KernelFamily::KernelFamily(KernelKind k, std::size_t d, double M) : kind(k), dim(d), bound_constant_M(M) {
  require(d >= 1, ErrorKind::shape, "kernel dimension must be positive");
  require(M > 0.0, ErrorKind::domain, "bound constant M must be positive");
}

SmoothnessClass KernelFamily::smoothness() const noexcept {
  switch (kind) {
    case KernelKind::cauchy: return {SmoothnessClass::Kind::super_smooth, 1.0};
    case KernelKind::laplace: return {SmoothnessClass::Kind::ordinary_smooth, 2.0};
    default: return {SmoothnessClass::Kind::super_smooth, 2.0};
  }
}

double KernelFamily::xi_exponent() const noexcept { return kind == KernelKind::cauchy ? 1.0 : 2.0; }

double KernelFamily::perturbation_constant() const noexcept { return kind == KernelKind::cauchy ? 1.0 : 0.5; }

void KernelFamily::check_scale(const SpdScale& scale) const {
  require_dim(dim, scale.dim());
  if (kind != KernelKind::gaussian_isotropic) return;
  const Matrix& m = scale.matrix();
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const double want = i == j ? m(0, 0) : 0.0;
      require(std::abs(m(i, j) - want) <= 1e-12 * std::max(1.0, std::abs(m(0, 0))), ErrorKind::precondition,
              "isotropic Gaussian kernel needs a scale of the form sigma^2 I");
    }
}

KernelKind parse_kernel(std::string_view name) {
  if (name == "gaussian") return KernelKind::gaussian;
  if (name == "gaussian-iso") return KernelKind::gaussian_isotropic;
  if (name == "cauchy") return KernelKind::cauchy;
  if (name == "laplace") return KernelKind::laplace;
  throw Error(ErrorKind::unsupported_kernel, "unknown kernel '" + std::string(name) + "'");
}

std::string_view to_string(KernelKind kind) noexcept {
  switch (kind) {
    case KernelKind::gaussian: return "gaussian";
    case KernelKind::gaussian_isotropic: return "gaussian-iso";
    case KernelKind::cauchy: return "cauchy";
    case KernelKind::laplace: return "laplace";
  }
  return "unknown";
}

double density_radial(const KernelFamily& k, double q, double det_scale) {
  const auto d = static_cast<double>(k.dim);
  const double norm = 1.0 / std::sqrt(det_scale);
  switch (k.kind) {
    case KernelKind::gaussian:
    case KernelKind::gaussian_isotropic:
      return norm * std::exp(-0.5 * q) / two_pi_pow(k.dim);
    case KernelKind::cauchy:
      return norm * std::tgamma(0.5 * (d + 1.0)) /
             (std::pow(std::numbers::pi, 0.5 * (d + 1.0)) * std::pow(1.0 + q, 0.5 * (d + 1.0)));
    case KernelKind::laplace: {
      if (k.dim == 1) return norm * std::exp(-std::sqrt(2.0 * q)) / std::sqrt(2.0);
      q = std::max(q, kMinRadius2);
      const double z = std::sqrt(2.0 * q);
      const double nu = 0.5 * (d - 2.0);
      return norm * 2.0 * std::pow(0.5 * q, -0.5 * nu) * bessel_k(nu, z) / two_pi_pow(k.dim);
    }
  }
  return 0.0;
}

double density(const KernelFamily& k, std::span<const double> x, std::span<const double> theta, const SpdScale& scale) {
  require_dim(k.dim, x.size());
  require_dim(k.dim, theta.size());
  k.check_scale(scale);
  Vector diff(k.dim);
  for (std::size_t i = 0; i < k.dim; ++i) diff[i] = x[i] - theta[i];
  return density_radial(k, quad_form(scale.inverse(), diff), scale.determinant());
}

double charfn(const KernelFamily& k, std::span<const double> xi_vec, const SpdScale& scale) {
  require_dim(k.dim, xi_vec.size());
  const double s = quad_form(scale.matrix(), xi_vec);
  switch (k.kind) {
    case KernelKind::cauchy: return std::exp(-std::sqrt(s));
    case KernelKind::laplace: return 1.0 / (1.0 + 0.5 * s);
    default: return std::exp(-0.5 * s);
  }
}

Envelope smoothness_envelope(const KernelFamily& k, double t, const ParameterSpace& space) {
  require(t >= 0.0, ErrorKind::domain, "frequency norm must be nonnegative");
  switch (k.kind) {
    case KernelKind::cauchy:
      return {std::exp(-std::sqrt(space.lambda_max) * t), std::exp(-std::sqrt(space.lambda_min) * t)};
    case KernelKind::laplace: {
      const double c1 = 1.0 / std::max(1.0, 0.5 * space.lambda_max);
      const double c2 = 1.0 / std::min(1.0, 0.5 * space.lambda_min);
      return {c1 / (1.0 + t * t), c2 / (1.0 + t * t)};
    }
    default:
      return {std::exp(-0.5 * space.lambda_max * t * t), std::exp(-0.5 * space.lambda_min * t * t)};
  }
}

double psi(const KernelFamily& k, double t) {
  require(t >= 0.0, ErrorKind::domain, "Psi needs t >= 0");
  switch (k.kind) {
    case KernelKind::cauchy: return t * t;
    case KernelKind::laplace: return t;
    default:
      require(t < 1.0, ErrorKind::domain, "Gaussian Psi is defined for t in (0, 1)");
      if (t == 0.0) return 0.0;
      return std::exp(-k.bound_constant_M * std::log(1.0 / t) / t);
  }
}

double psi_inverse(const KernelFamily& k, double s) {
  require(s >= 0.0, ErrorKind::domain, "Psi inverse needs s >= 0");
  switch (k.kind) {
    case KernelKind::cauchy: return std::sqrt(s);
    case KernelKind::laplace: return s;
    default: {
      require(s < 1.0, ErrorKind::domain, "Gaussian Psi takes values in [0, 1)");
      if (s == 0.0) return 0.0;
      double lo = 0.0;
      double hi = 1.0;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (psi(k, mid) < s) lo = mid;
        else hi = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
}

double xi(const KernelFamily& k, double t) {
  require(t >= 0.0, ErrorKind::domain, "Xi needs t >= 0");
  return k.kind == KernelKind::cauchy ? std::sqrt(t) : t;
}

double xi_inverse(const KernelFamily& k, double s) {
  require(s >= 0.0, ErrorKind::domain, "Xi inverse needs s >= 0");
  return k.kind == KernelKind::cauchy ? s * s : s;
}

Vector sample_kernel(const KernelFamily& k, std::span<const double> theta, const SpdScale& scale, CounterRng& rng) {
  require_dim(k.dim, theta.size());
  if (k.kind == KernelKind::laplace && k.dim == 1) {
    const double b = std::sqrt(0.5 * scale.matrix()(0, 0));
    const double e1 = rng.exponential();
    const double e2 = rng.exponential();
    return {theta[0] + b * (e1 - e2)};
  }
  const Vector z = rng.normal_vector(k.dim);
  Vector x = scale.sqrt() * z;
  double factor = 1.0;
  if (k.kind == KernelKind::cauchy) factor = 1.0 / std::abs(rng.normal());
  else if (k.kind == KernelKind::laplace) factor = std::sqrt(rng.exponential());
  for (std::size_t i = 0; i < k.dim; ++i) x[i] = theta[i] + factor * x[i];
  return x;
}

}  // namespace mixbound
