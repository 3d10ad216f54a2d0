#include "mixbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixbound/error.hpp"
#include "mixbound/parallel.hpp"
#include "mixbound/transport.hpp"

namespace mixbound {

namespace {

double psi_or_zero(const KernelFamily& k, double t) { return t == 0.0 ? 0.0 : psi(k, t); }

void check_inputs(double w1, double dsig) {
  require(w1 >= 0.0 && std::isfinite(w1), ErrorKind::domain, "w1 must be finite and nonnegative");
  require(dsig >= 0.0 && std::isfinite(dsig), ErrorKind::domain, "scale discrepancy must be finite and nonnegative");
}

KernelFamily with_constant(const KernelFamily& k, double M) {
  KernelFamily out = k;
  out.bound_constant_M = M;
  return out;
}

}  // namespace

BoundSpec BoundSpec::for_kernel(BoundRegime regime, const KernelFamily& k) {
  BoundSpec s;
  s.regime = regime;
  s.alpha = k.smoothness().order;
  s.beta = k.smoothness().order;
  s.p = k.xi_exponent();
  s.d = static_cast<double>(k.dim);
  s.M = k.bound_constant_M;
  return s;
}

void BoundSpec::validate() const {
  for (double v : {C, C_tilde, C_prime, M, alpha, beta, p, d})
    require(v > 0.0 && std::isfinite(v), ErrorKind::domain, "bound constants must be positive");
}

double bound_supersmooth(const BoundSpec& spec, const KernelFamily& k, double w1, double dsig) {
  require(spec.regime == BoundRegime::super_smooth, ErrorKind::precondition, "spec regime is not super-smooth");
  spec.validate();
  check_inputs(w1, dsig);
  const KernelFamily kk = with_constant(k, spec.M);
  double location = 0.0;
  if (w1 > 0.0) {
    const double e = std::exp(-spec.C / std::pow(w1, spec.alpha));
    location = std::min(e, psi_or_zero(kk, xi_inverse(kk, spec.C_tilde * e)));
  }
  return spec.C_prime * (psi_or_zero(kk, dsig) + location);
}

double bound_ordinary(const BoundSpec& spec, const KernelFamily& k, double w1, double dsig) {
  require(spec.regime == BoundRegime::ordinary_smooth, ErrorKind::precondition, "spec regime is not ordinary-smooth");
  spec.validate();
  check_inputs(w1, dsig);
  const KernelFamily kk = with_constant(k, spec.M);
  const double direct = std::pow(w1, spec.d + spec.beta + 1.0);
  const double via_scale = psi_or_zero(kk, xi_inverse(kk, spec.C * std::pow(w1, spec.d + spec.p + 1.0)));
  return spec.C_prime * (psi_or_zero(kk, dsig) + std::min(direct, via_scale));
}

double bound_pde(const BoundSpec& spec, const KernelFamily& k, double w1, double dsig) {
  require(spec.regime == BoundRegime::pde_inversion, ErrorKind::precondition, "spec regime is not PDE inversion");
  spec.validate();
  check_inputs(w1, dsig);
  require(spec.beta == std::floor(spec.beta), ErrorKind::domain, "PDE order must be an integer");
  const KernelFamily kk = with_constant(k, spec.M);
  const double wb = std::pow(w1, spec.beta);
  return spec.C_prime * (psi_or_zero(kk, dsig) + std::min(wb, psi_or_zero(kk, spec.C * wb)));
}

double bound_kernel(const KernelFamily& k, double w1, double dsig, const BoundSpec& c) {
  c.validate();
  check_inputs(w1, dsig);
  const KernelFamily kk = with_constant(k, c.M);
  double location = 0.0;
  double scale = 0.0;
  switch (k.kind) {
    case KernelKind::gaussian:
      if (w1 > 0.0) location = std::exp(-c.C * std::exp(c.C_tilde / (w1 * w1)) / (w1 * w1));
      scale = psi_or_zero(kk, dsig);
      break;
    case KernelKind::gaussian_isotropic:
      if (w1 > 0.0) location = std::exp(-c.C / (w1 * w1));
      scale = psi_or_zero(kk, dsig);
      break;
    case KernelKind::cauchy:
      if (w1 > 0.0) location = std::exp(-c.C / w1);
      scale = dsig * dsig;
      break;
    case KernelKind::laplace:
      location = w1 * w1;
      scale = dsig;
      break;
  }
  return c.C_prime * (location + scale);
}

RateTriple theoretical_rate(const KernelFamily& k, std::uint64_t n) {
  require(n >= 3, ErrorKind::domain, "rates need n >= 3");
  const double ln = std::log(static_cast<double>(n));
  const double lln = std::log(ln);
  const double d = static_cast<double>(k.dim);
  switch (k.kind) {
    case KernelKind::gaussian:
      return {std::pow(n, -0.5) * std::pow(ln, 0.5 * (d + 1.0)), 1.0 / std::sqrt(lln), lln / ln};
    case KernelKind::gaussian_isotropic:
      return {std::pow(n, -0.5) * std::pow(ln, 0.5 * (d + 1.0)), 1.0 / std::sqrt(ln), lln / ln};
    case KernelKind::laplace:
      require(k.dim == 1, ErrorKind::no_known_rate, "no posterior rate is known for multivariate Laplace mixtures");
      return {std::pow(n, -0.25) * std::pow(ln, 1.25), std::pow(n, -0.125) * std::pow(ln, 0.625),
              std::pow(n, -0.25) * std::pow(ln, 1.25)};
    case KernelKind::cauchy:
      break;
  }
  throw Error(ErrorKind::no_known_rate, "no posterior rate is known for Cauchy mixtures");
}

MixtureConfig sample_admissible(const KernelFamily& k, const ParameterSpace& space, std::size_t atoms_max,
                                CounterRng& rng) {
  require(atoms_max >= 1, ErrorKind::domain, "atoms_max must be positive");
  const std::size_t d = space.dim;
  const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(atoms_max));
  std::vector<Point> atoms;
  std::vector<double> weights;
  for (std::size_t j = 0; j < std::min(m, atoms_max); ++j) {
    atoms.push_back(rng.uniform_ball(d, 0.95 * space.radius));
    weights.push_back(rng.exponential());
  }
  const double margin = 0.01 * (space.lambda_max - space.lambda_min);
  const double lo = space.lambda_min + margin;
  const double hi = space.lambda_max - margin;
  Matrix scale;
  if (k.kind == KernelKind::gaussian_isotropic) {
    scale = Matrix::identity(d, rng.uniform(lo, hi));
  } else {
    Vector eig(d);
    for (auto& e : eig) e = rng.uniform(lo, hi);
    const Matrix q = random_rotation(d, rng);
    scale = q * Matrix::diagonal(eig) * q.transpose();
  }
  return MixtureConfig(DiscreteMeasure(std::move(atoms), std::move(weights), space), SpdScale(scale, space), space);
}

FuzzReport fuzz_inverse_bound(const KernelFamily& k, const ParameterSpace& space, std::uint64_t trials,
                              std::size_t atoms_max, std::uint64_t budget, std::uint64_t seed) {
  return fuzz_inverse_bound(k, space, trials, budget, seed, [&](CounterRng& rng) {
    MixtureConfig g = sample_admissible(k, space, atoms_max, rng);
    MixtureConfig gp = sample_admissible(k, space, atoms_max, rng);
    return MixturePair{std::move(g), std::move(gp)};
  });
}

FuzzReport fuzz_inverse_bound(const KernelFamily& k, const ParameterSpace& space, std::uint64_t trials,
                              std::uint64_t budget, std::uint64_t seed, const PairSampler& sampler) {
  require(trials >= 1, ErrorKind::domain, "fuzzing needs at least one trial");
  require(k.dim == space.dim, ErrorKind::shape, "kernel and space dimensions differ");
  constexpr int kMaxRedraws = 1000;
  struct Slot {
    FuzzRecord record;
    std::uint64_t rejections = 0;
    nlohmann::json pair;
  };
  std::vector<Slot> slots(trials);
  parallel_for(trials, [&](std::size_t t) {
    CounterRng rng(derive_seed(seed, 0xf022, t));
    Slot& slot = slots[t];
    for (int attempt = 0;; ++attempt) {
      require(attempt < kMaxRedraws, ErrorKind::degenerate_measure, "pair sampler keeps producing unusable pairs");
      auto [g, gp] = sampler(rng);
      const double w1 = w1_exact(g.mixing, gp.mixing).cost;
      const double dsig = operator_norm_distance(g.scale, gp.scale);
      const bool identical = w1 == 0.0 && dsig == 0.0;
      const bool outside = k.is_gaussian() && dsig >= 1.0;
      if (identical || outside) {
        ++slot.rejections;
        continue;
      }
      const L1Estimate l1 = l1_distance(g, gp, k, budget, derive_seed(seed, 0x11, t));
      const double bound = bound_kernel(k, w1, dsig);
      slot.record = {t, w1, dsig, l1.value, l1.std_error, bound,
                     bound > 0.0 ? l1.value / bound : std::numeric_limits<double>::infinity()};
      slot.pair = {{"G", to_json(g)}, {"G_prime", to_json(gp)}};
      break;
    }
  });
  FuzzReport report;
  report.trials = trials;
  report.min_ratio = std::numeric_limits<double>::infinity();
  for (auto& slot : slots) {
    report.rejections += slot.rejections;
    if (slot.record.ratio <= 0.0) ++report.violations;
    if (slot.record.ratio < report.min_ratio) {
      report.min_ratio = slot.record.ratio;
      report.argmin_pair = slot.pair;
    }
    report.records.push_back(slot.record);
  }
  report.fitted_constant = report.min_ratio;
  return report;
}

double ls_slope(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorKind::shape, "slope fit needs two or more paired values");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  require(sxx > 0.0, ErrorKind::degenerate_measure, "slope fit needs distinct x values");
  return sxy / sxx;
}

std::vector<ProfilePoint> scale_only_profile(const KernelFamily& k, const MixtureConfig& g, const Matrix& direction,
                                             std::span<const double> steps, std::uint64_t budget) {
  const double dn = operator_norm(direction.symmetrized());
  require(dn > 0.0, ErrorKind::domain, "scale direction must be nonzero");
  std::vector<ProfilePoint> out;
  for (double t : steps) {
    const Matrix shifted = g.scale.matrix() + (t / dn) * direction.symmetrized();
    const MixtureConfig gp(g.mixing, SpdScale(shifted, g.space), g.space);
    out.push_back({t, l1_distance(g, gp, k, budget, 0).value});
  }
  return out;
}

std::vector<ProfilePoint> location_only_profile(const KernelFamily& k, const MixtureConfig& g,
                                                std::span<const double> unit_shift, std::span<const double> steps,
                                                std::uint64_t budget) {
  std::vector<ProfilePoint> out;
  for (double t : steps) {
    Vector shift(unit_shift.begin(), unit_shift.end());
    for (auto& s : shift) s *= t;
    const MixtureConfig gp(g.mixing.shifted(shift, g.space), g.scale, g.space);
    out.push_back({t, l1_distance(g, gp, k, budget, 0).value});
  }
  return out;
}

double loglog_slope(std::span<const ProfilePoint> profile) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& p : profile) {
    require(p.step > 0.0 && p.l1 > 0.0, ErrorKind::domain, "log-log fit needs positive values");
    x.push_back(std::log(p.step));
    y.push_back(std::log(p.l1));
  }
  return ls_slope(x, y);
}

}  // namespace mixbound
