#include "mixbound/density_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mixbound/error.hpp"
#include "mixbound/parallel.hpp"
#include "mixbound/quadrature.hpp"
#include "mixbound/random.hpp"
#include "mixbound/specfun.hpp"

namespace mixbound {

namespace {

constexpr double kTailWidth = 12.0;
constexpr std::uint64_t kMinBudget = 1000;
constexpr std::size_t kMcChunks = 64;

void check_pair(const MixtureConfig& g, const MixtureConfig& gp, const KernelFamily& k) {
  require(g.space == gp.space, ErrorKind::shape, "mixtures live in different parameter spaces");
  require(k.dim == g.dim(), ErrorKind::shape, "kernel dimension differs from the mixtures'");
}

double l1_line(const MixtureDensity& p, const MixtureDensity& pp, const MixtureConfig& g, const MixtureConfig& gp,
               const KernelFamily& k) {
  std::vector<double> atoms;
  for (const auto& a : g.mixing.atoms()) atoms.push_back(a[0]);
  for (const auto& a : gp.mixing.atoms()) atoms.push_back(a[0]);
  double x0[1];
  auto diff = [&](double x) {
    x0[0] = x;
    return std::abs(p(x0) - pp(x0));
  };
  if (k.kind == KernelKind::cauchy) {
    // x = tan(u) keeps the polynomial tails integrable on a finite interval.
    const double h = 0.5 * std::numbers::pi;
    for (auto& a : atoms) a = std::atan(a);
    const auto breaks = breakpoints(atoms, -h, h);
    return integrate_adaptive(
        [&](double u) {
          const double c = std::cos(u);
          if (c <= 0.0) return 0.0;
          return diff(std::tan(u)) / (c * c);
        },
        breaks, 1e-11);
  }
  const double edge = g.space.radius + kTailWidth * std::sqrt(g.space.lambda_max);
  const auto breaks = breakpoints(atoms, -edge, edge);
  return integrate_adaptive(diff, breaks, 1e-11);
}

double l1_plane(const MixtureDensity& p, const MixtureDensity& pp, const ParameterSpace& space, std::uint64_t budget) {
  // Polar coordinates about the origin, r = c s / (1 - s); Gauss-Legendre in s,
  // trapezoid in the angle; refine both until two levels agree.
  const double c = space.radius + std::sqrt(space.lambda_max);
  const auto nodes = legendre_nodes();
  const auto weights = legendre_weights();
  auto level = [&](std::size_t panels, std::size_t angles) {
    const double hs = 1.0 / static_cast<double>(panels);
    const double ha = 2.0 * std::numbers::pi / static_cast<double>(angles);
    double total = 0.0;
    double x[2];
    for (std::size_t pn = 0; pn < panels; ++pn) {
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double s = (static_cast<double>(pn) + 0.5 + 0.5 * nodes[q]) * hs;
        const double r = c * s / (1.0 - s);
        const double jac = c / ((1.0 - s) * (1.0 - s)) * r;
        double ring = 0.0;
        for (std::size_t a = 0; a < angles; ++a) {
          // half-step offset keeps nodes off the axes where atoms often sit
          const double phi = (static_cast<double>(a) + 0.5) * ha;
          x[0] = r * std::cos(phi);
          x[1] = r * std::sin(phi);
          ring += std::abs(p(x) - pp(x));
        }
        total += 0.5 * hs * weights[q] * jac * ring * ha;
      }
    }
    return total;
  };
  std::size_t panels = 8;
  std::size_t angles = 64;
  double prev = level(panels, angles);
  std::uint64_t used = panels * 20 * angles;
  while (true) {
    const std::size_t np = panels * 2;
    const std::size_t na = angles * 2;
    const std::uint64_t cost = np * 20 * na;
    if (used + cost > budget) return prev;
    const double cur = level(np, na);
    used += cost;
    panels = np;
    angles = na;
    if (std::abs(cur - prev) < 2e-5) return cur;
    prev = cur;
  }
}

struct McChunk {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;
};

L1Estimate l1_importance(const MixtureDensity& p, const MixtureDensity& pp, const MixtureConfig& g,
                         const MixtureConfig& gp, const KernelFamily& k, std::uint64_t budget, std::uint64_t seed) {
  std::vector<McChunk> chunks(kMcChunks);
  const CounterRng root(seed, 0x11);
  parallel_for(kMcChunks, [&](std::size_t c) {
    CounterRng rng = root.substream(c);
    const std::uint64_t n = budget / kMcChunks + (c < budget % kMcChunks ? 1 : 0);
    McChunk& out = chunks[c];
    for (std::uint64_t i = 0; i < n; ++i) {
      const MixtureConfig& src = rng.uniform() < 0.5 ? g : gp;
      const std::size_t j = rng.categorical(src.mixing.weights());
      const Vector x = sample_kernel(k, src.mixing.atom(j), src.scale, rng);
      const double a = p(x);
      const double b = pp(x);
      const double q = 0.5 * (a + b);
      const double v = q > 0.0 ? std::abs(a - b) / q : 0.0;
      out.sum += v;
      out.sum_sq += v * v;
      ++out.count;
    }
  });
  McChunk total;
  for (const auto& c : chunks) {
    total.sum += c.sum;
    total.sum_sq += c.sum_sq;
    total.count += c.count;
  }
  const double n = static_cast<double>(total.count);
  const double mean = total.sum / n;
  const double var = std::max(0.0, total.sum_sq / n - mean * mean);
  L1Estimate est;
  est.value = std::clamp(mean, 0.0, 2.0);
  est.std_error = std::sqrt(var / n);
  est.method = L1Estimate::Method::importance_mc;
  est.budget = budget;
  return est;
}

}  // namespace

std::string_view to_string(L1Estimate::Method m) noexcept {
  return m == L1Estimate::Method::quadrature ? "quadrature" : "importance_mc";
}

MixtureDensity::MixtureDensity(const MixtureConfig& g, const KernelFamily& k)
    : kernel_(k),
      atoms_(g.mixing.atoms()),
      weights_(g.mixing.weights()),
      inverse_(g.scale.inverse()),
      det_(g.scale.determinant()) {
  require(k.dim == g.dim(), ErrorKind::shape, "kernel dimension differs from the mixture's");
  k.check_scale(g.scale);
}

double MixtureDensity::operator()(std::span<const double> x) const {
  const std::size_t d = kernel_.dim;
  require(x.size() == d, ErrorKind::shape, "evaluation point has the wrong dimension");
  double total = 0.0;
  double diff[16];
  Vector heap;
  double* dv = diff;
  if (d > 16) {
    heap.resize(d);
    dv = heap.data();
  }
  for (std::size_t j = 0; j < atoms_.size(); ++j) {
    if (weights_[j] == 0.0) continue;
    for (std::size_t i = 0; i < d; ++i) dv[i] = x[i] - atoms_[j][i];
    const double q = quad_form(inverse_, std::span<const double>(dv, d));
    total += weights_[j] * density_radial(kernel_, q, det_);
  }
  return total;
}

double mixture_density(const MixtureConfig& g, const KernelFamily& k, std::span<const double> x) {
  return MixtureDensity(g, k)(x);
}

L1Estimate l1_distance(const MixtureConfig& g, const MixtureConfig& gp, const KernelFamily& k, std::uint64_t budget,
                       std::uint64_t seed, L1Method method) {
  check_pair(g, gp, k);
  require(budget >= kMinBudget, ErrorKind::insufficient_budget,
          "L1 budget " + std::to_string(budget) + " is below " + std::to_string(kMinBudget));
  const MixtureDensity p(g, k);
  const MixtureDensity pp(gp, k);
  if (method == L1Method::automatic) method = k.dim <= 2 ? L1Method::quadrature : L1Method::importance_mc;
  if (method == L1Method::importance_mc) return l1_importance(p, pp, g, gp, k, budget, seed);
  require(k.dim <= 2, ErrorKind::unsupported_dimension, "quadrature L1 is available for d <= 2 only");
  L1Estimate est;
  est.method = L1Estimate::Method::quadrature;
  est.budget = budget;
  const double v = k.dim == 1 ? l1_line(p, pp, g, gp, k) : l1_plane(p, pp, g.space, budget);
  est.value = std::clamp(v, 0.0, 2.0);
  return est;
}

std::complex<double> mixture_charfn(const MixtureConfig& g, const KernelFamily& k, std::span<const double> xi_vec) {
  require(xi_vec.size() == g.dim() && k.dim == g.dim(), ErrorKind::shape, "frequency has the wrong dimension");
  std::complex<double> phi_p{0.0, 0.0};
  for (std::size_t j = 0; j < g.mixing.size(); ++j) {
    const double t = dot(xi_vec, g.mixing.atom(j));
    phi_p += g.mixing.weight(j) * std::complex<double>(std::cos(t), std::sin(t));
  }
  return phi_p * charfn(k, xi_vec, g.scale);
}

double hermite_even(int k, double sigma2, double x) {
  double total = 0.0;
  double binom = 1.0;  // C(2k, 2j)
  for (int j = 0; j <= k; ++j) {
    if (j > 0) binom *= static_cast<double>((2 * k - 2 * j + 2) * (2 * k - 2 * j + 1)) / ((2.0 * j - 1.0) * (2.0 * j));
    const double sign = j % 2 == 0 ? 1.0 : -1.0;
    total += binom * std::pow(x, 2 * k - 2 * j) * sign * std::pow(sigma2, j) * double_factorial_odd(j);
  }
  return total;
}

double hermite_moment_functional(int k, double sigma2, const MixtureConfig& g) {
  require(g.dim() == 1, ErrorKind::unsupported_dimension, "Hermite functional is univariate");
  require(k >= 1 && sigma2 > 0.0, ErrorKind::domain, "need k >= 1 and sigma2 > 0");
  const KernelFamily gauss(KernelKind::gaussian, 1);
  const MixtureDensity p(g, gauss);
  const double s = std::sqrt(g.scale.matrix()(0, 0));
  const double edge = g.space.radius + (kTailWidth + 2.0 * k) * s;
  std::vector<double> atoms;
  for (const auto& a : g.mixing.atoms()) atoms.push_back(a[0]);
  double x0[1];
  return integrate_adaptive(
      [&](double x) {
        x0[0] = x;
        return hermite_even(k, sigma2, x) * p(x0);
      },
      breakpoints(atoms, -edge, edge), 1e-13);
}

}  // namespace mixbound
