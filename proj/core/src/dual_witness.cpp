#include "mixbound/dual_witness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "mixbound/error.hpp"
#include "mixbound/quadrature.hpp"
#include "mixbound/specfun.hpp"
#include "mixbound/transport.hpp"

namespace mixbound {

namespace {

constexpr double kPi = std::numbers::pi;

void require_low_dim(std::size_t d) {
  require(d == 1 || d == 2, ErrorKind::unsupported_dimension, "dual-witness tools support d in {1, 2}");
}

double bump(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

double sphere_area(std::size_t d) {
  const double h = 0.5 * static_cast<double>(d);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

double radial_bump_moment(std::size_t d, double extra_power) {
  const auto dd = static_cast<double>(d);
  return sphere_area(d) * integrate_adaptive(
                              [&](double r) { return bump(r * r) * std::pow(r, dd - 1.0 + extra_power); }, 0.0, 1.0,
                              1e-14);
}

struct BumpConstants {
  std::array<double, 4> normalizer{};
  std::array<double, 4> first_moment{};
};

const BumpConstants& bump_constants() {
  static const BumpConstants c = [] {
    BumpConstants b;
    for (std::size_t d = 1; d <= 3; ++d) {
      b.normalizer[d] = radial_bump_moment(d, 0.0);
      b.first_moment[d] = radial_bump_moment(d, 1.0) / b.normalizer[d];
    }
    return b;
  }();
  return c;
}

/// eta on the unit-radius configuration as a function of |x| in [1, 2];
/// eta_R(x) = eta_1(x / R).
class EtaTable {
 public:
  static constexpr std::size_t kPoints = 4001;

  explicit EtaTable(std::size_t d) {
    const double A = 1.5;
    const double eps = 0.5;
    const double cnorm = mollifier_normalizer(d);
    values_.resize(kPoints);
    for (std::size_t k = 0; k < kPoints; ++k) {
      const double r = 1.0 + static_cast<double>(k) / static_cast<double>(kPoints - 1);
      if (d == 1) {
        const double lo = std::max(-eps, r - A);
        const double hi = std::min(eps, r + A);
        values_[k] = lo < hi ? integrate_adaptive(
                                   [&](double s) { return bump((s / eps) * (s / eps)) / (cnorm * eps); }, lo, hi, 1e-13)
                             : 0.0;
      } else {
        values_[k] = integrate_adaptive(
            [&](double s) {
              if (s <= 0.0) return 0.0;
              const double c = (r * r + s * s - A * A) / (2.0 * r * s);
              const double frac = c <= -1.0 ? 1.0 : (c >= 1.0 ? 0.0 : std::acos(c) / kPi);
              return bump((s / eps) * (s / eps)) / (cnorm * eps * eps) * 2.0 * kPi * s * frac;
            },
            0.0, eps, 1e-13);
      }
    }
    values_.front() = 1.0;
    values_.back() = 0.0;
    const double h = 1.0 / static_cast<double>(kPoints - 1);
    for (std::size_t k = 0; k + 1 < kPoints; ++k) slope_ = std::max(slope_, std::abs(values_[k + 1] - values_[k]) / h);
  }

  double operator()(double r) const {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double pos = (r - 1.0) * static_cast<double>(kPoints - 1);
    const auto k = std::min(static_cast<std::size_t>(pos), kPoints - 2);
    const double t = pos - static_cast<double>(k);
    return std::clamp((1.0 - t) * values_[k] + t * values_[k + 1], 0.0, 1.0);
  }

  double max_slope() const { return slope_; }

 private:
  std::vector<double> values_;
  double slope_ = 0.0;
};

const EtaTable& eta_table(std::size_t d) {
  require_low_dim(d);
  if (d == 1) {
    static const EtaTable line(1);
    return line;
  }
  static const EtaTable plane(2);
  return plane;
}

double sinc(double t) { return std::abs(t) < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t; }

double cubic_bspline(double t) {
  t = std::abs(t);
  if (t <= 1.0) return 2.0 / 3.0 - t * t + 0.5 * t * t * t;
  if (t < 2.0) return (2.0 - t) * (2.0 - t) * (2.0 - t) / 6.0;
  return 0.0;
}

double jackson_1d(std::size_t d, double x) {
  const double sd = std::sqrt(static_cast<double>(d));
  const double s = sinc(x / (4.0 * sd));
  return 3.0 / (8.0 * kPi * sd) * s * s * s * s;
}

}  // namespace

WitnessFunction witness_from_transport(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  require(p.dim() == q.dim(), ErrorKind::shape, "measures have different dimensions");
  const TransportPlan plan = w1_exact(p, q);
  auto ubar = [&](std::span<const double> x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < q.size(); ++j) best = std::min(best, distance(x, q.atom(j)) - plan.v[j]);
    return best;
  };
  WitnessFunction w;
  for (const auto& a : p.atoms()) {
    w.atoms.push_back(a);
    w.values.push_back(ubar(a));
  }
  for (const auto& a : q.atoms()) {
    w.atoms.push_back(a);
    w.values.push_back(ubar(a));
  }
  const Vector origin(p.dim(), 0.0);
  const double shift = mcshane_extend(w, origin);
  for (auto& v : w.values) v -= shift;
  return w;
}

double mcshane_extend(const WitnessFunction& w, std::span<const double> x) {
  require(!w.atoms.empty(), ErrorKind::degenerate_measure, "witness has no sample points");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.atoms.size(); ++i) best = std::min(best, w.values[i] + distance(x, w.atoms[i]));
  return best;
}

double cutoff_eta(double R, std::span<const double> x) {
  require(R > 0.0, ErrorKind::domain, "cutoff radius must be positive");
  return eta_table(x.size())(norm(x) / R);
}

double cutoff_gradient_bound(double R, std::size_t d) {
  require(R > 0.0, ErrorKind::domain, "cutoff radius must be positive");
  return eta_table(d).max_slope() / R;
}

double mollifier_normalizer(std::size_t d) {
  require(d >= 1, ErrorKind::shape, "dimension must be positive");
  if (d <= 3) return bump_constants().normalizer[d];
  return radial_bump_moment(d, 0.0);
}

double mollifier_first_moment(std::size_t d) {
  require(d >= 1, ErrorKind::shape, "dimension must be positive");
  if (d <= 3) return bump_constants().first_moment[d];
  return radial_bump_moment(d, 1.0) / radial_bump_moment(d, 0.0);
}

double mollifier_psi(std::size_t d, std::span<const double> x) {
  require(x.size() == d, ErrorKind::shape, "point has the wrong dimension");
  return bump(dot(x, x)) / mollifier_normalizer(d);
}

double jackson_kernel(std::size_t d, std::span<const double> x) {
  require(x.size() == d, ErrorKind::shape, "point has the wrong dimension");
  double v = 1.0;
  for (double xi : x) v *= jackson_1d(d, xi);
  return v;
}

double jackson_ft(std::size_t d, std::span<const double> xi) {
  require(xi.size() == d, ErrorKind::shape, "frequency has the wrong dimension");
  const double sd = std::sqrt(static_cast<double>(d));
  double v = 1.0;
  for (double t : xi) v *= 1.5 * cubic_bspline(2.0 * sd * t);
  return v;
}

double jackson_first_moment(std::size_t d) {
  require(d >= 1 && d <= 3, ErrorKind::unsupported_dimension, "Jackson moment is tabulated for d <= 3");
  const double sd = std::sqrt(static_cast<double>(d));
  if (d == 1) return 12.0 * sd * std::numbers::ln2 / kPi;
  // Tensor Gauss-Legendre after x = a tan(u) in each coordinate.
  const double a = 4.0 * sd;
  const std::size_t panels = d == 2 ? 40 : 12;
  std::vector<double> u;
  std::vector<double> wt;
  const auto nodes = legendre_nodes();
  const auto weights = legendre_weights();
  const double h = kPi / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p)
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double t = -0.5 * kPi + (static_cast<double>(p) + 0.5 + 0.5 * nodes[k]) * h;
      const double c = std::cos(t);
      u.push_back(a * std::tan(t));
      wt.push_back(0.5 * h * weights[k] * a / (c * c) * jackson_1d(d, a * std::tan(t)));
    }
  const std::size_t n = u.size();
  double total = 0.0;
  if (d == 2) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) total += wt[i] * wt[j] * std::hypot(u[i], u[j]);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          total += wt[i] * wt[j] * wt[k] * std::sqrt(u[i] * u[i] + u[j] * u[j] + u[k] * u[k]);
  }
  return total;
}

double witness_cutoff(const WitnessFunction& w, const ParameterSpace& space, std::span<const double> x) {
  const double eta = cutoff_eta(space.radius, x);
  return eta == 0.0 ? 0.0 : eta * mcshane_extend(w, x);
}

double bandlimit(const WitnessFunction& w, const ParameterSpace& space, double lambda, std::span<const double> x) {
  require(lambda >= 1.0, ErrorKind::domain, "band limit Lambda must be at least 1");
  const std::size_t d = x.size();
  require_low_dim(d);
  require(d == space.dim, ErrorKind::shape, "point dimension differs from the space");
  const double R = space.radius;
  const double zero_gap = kPi * 4.0 * std::sqrt(static_cast<double>(d)) / lambda;

  auto breaks_for = [&](std::size_t axis, double centre) {
    std::vector<double> pts{-R, R, centre};
    for (const auto& a : w.atoms) pts.push_back(a[axis]);
    for (int k = 1; k <= 8; ++k) {
      pts.push_back(centre - k * zero_gap);
      pts.push_back(centre + k * zero_gap);
    }
    return breakpoints(std::move(pts), -2.0 * R, 2.0 * R);
  };

  if (d == 1) {
    // Composite Gauss-Legendre between the kinks of the lower envelope, with panels
    // no wider than half a zero gap of the kernel.
    auto breaks = breaks_for(0, x[0]);
    for (std::size_t i = 0; i < w.atoms.size(); ++i)
      for (std::size_t j = 0; j < w.atoms.size(); ++j) {
        const double yi = w.atoms[i][0];
        const double yj = w.atoms[j][0];
        if (yi < yj) breaks.push_back(0.5 * (w.values[j] - w.values[i] + yi + yj));
      }
    breaks = breakpoints(std::move(breaks), -2.0 * R, 2.0 * R);
    double t0[1];
    auto f = [&](double t) {
      t0[0] = t;
      return witness_cutoff(w, space, t0) * lambda * jackson_1d(1, lambda * (x[0] - t));
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double len = breaks[i + 1] - breaks[i];
      if (len <= 0.0) continue;
      const auto panels = static_cast<std::size_t>(std::ceil(len / (0.5 * zero_gap)));
      total += integrate_composite(f, breaks[i], breaks[i + 1], std::max<std::size_t>(panels, 1));
    }
    return total;
  }
  double t2[2];
  const auto outer = breaks_for(0, x[0]);
  const auto inner = breaks_for(1, x[1]);
  return integrate_adaptive(
      [&](double s) {
        const double ks = lambda * jackson_1d(2, lambda * (x[0] - s));
        if (ks == 0.0) return 0.0;
        return ks * integrate_adaptive(
                        [&](double t) {
                          t2[0] = s;
                          t2[1] = t;
                          return witness_cutoff(w, space, t2) * lambda * jackson_1d(2, lambda * (x[1] - t));
                        },
                        inner, 1e-8, 10);
      },
      outer, 1e-8, 10);
}

Certificate approximation_certificate(const WitnessFunction& w, const ParameterSpace& space, double lambda,
                                      std::size_t grid_size) {
  require(lambda >= 1.0, ErrorKind::domain, "band limit Lambda must be at least 1");
  require(grid_size >= 2, ErrorKind::domain, "certificate grid needs at least two points");
  const std::size_t d = space.dim;
  require_low_dim(d);
  const double R = space.radius;
  const double bound = (1.0 + 2.0 * R * cutoff_gradient_bound(R, d)) * jackson_first_moment(d) / lambda;
  double gap = 0.0;
  auto coord = [&](std::size_t k) { return -2.0 * R + 4.0 * R * static_cast<double>(k) / static_cast<double>(grid_size - 1); };
  if (d == 1) {
    for (std::size_t k = 0; k < grid_size; ++k) {
      const double x[1] = {coord(k)};
      gap = std::max(gap, std::abs(bandlimit(w, space, lambda, x) - witness_cutoff(w, space, x)));
    }
  } else {
    for (std::size_t a = 0; a < grid_size; ++a)
      for (std::size_t b = 0; b < grid_size; ++b) {
        const double x[2] = {coord(a), coord(b)};
        gap = std::max(gap, std::abs(bandlimit(w, space, lambda, x) - witness_cutoff(w, space, x)));
      }
  }
  return {gap, bound};
}

}  // namespace mixbound
