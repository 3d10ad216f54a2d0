#include "mixbound/quadrature.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

namespace mixbound {

namespace {

using Rule = boost::math::quadrature::gauss<double, 20>;

struct FullRule {
  std::array<double, 20> x{};
  std::array<double, 20> w{};
  FullRule() {
    // Boost stores the nonnegative half of the symmetric rule.
    const auto& a = Rule::abscissa();
    const auto& wt = Rule::weights();
    std::size_t k = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      x[k] = a[i];
      w[k++] = wt[i];
      if (a[i] != 0.0) {
        x[k] = -a[i];
        w[k++] = wt[i];
      }
    }
  }
};

const FullRule& full_rule() {
  static const FullRule rule;
  return rule;
}

}  // namespace

double integrate_adaptive(const Integrand& f, double a, double b, double tol, unsigned max_depth, double* error) {
  if (a == b) return 0.0;
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tol, &err);
  if (error) *error = err;
  return v;
}

double integrate_adaptive(const Integrand& f, std::span<const double> breaks, double tol, unsigned max_depth) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const std::size_t pieces = breaks.size() < 2 ? 0 : breaks.size() - 1;
  // Boost's tolerance is relative to each call's own estimate, so tiny pieces would be
  // refined to full depth. A coarse pass fixes one absolute target for every piece.
  std::vector<double> coarse(pieces);
  double mass = 0.0;
  for (std::size_t i = 0; i < pieces; ++i) {
    if (breaks[i] == breaks[i + 1]) continue;
    double l1 = 0.0;
    coarse[i] = GK::integrate(f, breaks[i], breaks[i + 1], 0, tol, nullptr, &l1);
    mass += l1;
  }
  const double target = tol * mass;
  double total = 0.0;
  for (std::size_t i = 0; i < pieces; ++i) {
    if (breaks[i] == breaks[i + 1]) continue;
    const double scale = std::abs(coarse[i]);
    const double rel = scale > target ? target / scale : 1.0;
    total += GK::integrate(f, breaks[i], breaks[i + 1], max_depth, std::max(rel, tol), nullptr);
  }
  return total;
}

double integrate_composite(const Integrand& f, double a, double b, std::size_t panels) {
  const auto& rule = full_rule();
  const double h = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * h;
    double s = 0.0;
    for (std::size_t k = 0; k < 20; ++k) s += rule.w[k] * f(mid + 0.5 * h * rule.x[k]);
    total += 0.5 * h * s;
  }
  return total;
}

std::span<const double> legendre_nodes() { return full_rule().x; }
std::span<const double> legendre_weights() { return full_rule().w; }

std::vector<double> breakpoints(std::vector<double> points, double lo, double hi) {
  std::vector<double> out{lo, hi};
  for (double p : points)
    if (p > lo && p < hi) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace mixbound
