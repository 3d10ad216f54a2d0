#include "mixbound/pde_inversion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mixbound/error.hpp"
#include "mixbound/format.hpp"
#include "mixbound/quadrature.hpp"

namespace mixbound {

namespace {

void enumerate(std::size_t d, int order, MultiIndex& cur, std::size_t pos, int used, std::vector<MultiIndex>& out) {
  if (pos == d) {
    out.push_back(cur);
    return;
  }
  for (int k = 0; k + used <= order; ++k) {
    cur[pos] = k;
    enumerate(d, order, cur, pos + 1, used + k, out);
  }
}

// 1-d profile exp(-1/(1 - y^2)) and its first two derivatives in y.
struct Profile {
  double v;
  double d1;
  double d2;
};

Profile profile(double y) {
  const double s = 1.0 - y * y;
  if (s <= 0.0) return {0.0, 0.0, 0.0};
  const double g = std::exp(-1.0 / s);
  const double d1 = g * (-2.0 * y / (s * s));
  const double d2 = g * (4.0 * y * y / (s * s * s * s) - 2.0 / (s * s) - 8.0 * y * y / (s * s * s));
  return {g, d1, d2};
}

}  // namespace

double DifferentialOperatorSpec::coefficient(const MultiIndex& nu) const {
  for (std::size_t i = 0; i < indices.size(); ++i)
    if (indices[i] == nu) return coefficients[i];
  return 0.0;
}

DifferentialOperatorSpec laplace_operator(const SpdScale& scale) {
  DifferentialOperatorSpec op;
  op.dim = scale.dim();
  op.order = 2;
  MultiIndex cur(op.dim, 0);
  enumerate(op.dim, 2, cur, 0, 0, op.indices);
  std::sort(op.indices.begin(), op.indices.end());
  const Matrix& s = scale.matrix();
  for (const auto& nu : op.indices) {
    int total = 0;
    std::vector<std::size_t> axes;
    for (std::size_t j = 0; j < nu.size(); ++j) {
      total += nu[j];
      for (int r = 0; r < nu[j]; ++r) axes.push_back(j);
    }
    double c = 0.0;
    if (total == 0) c = 1.0;
    else if (total == 2 && axes[0] == axes[1]) c = -0.5 * s(axes[0], axes[0]);
    else if (total == 2) c = -s(axes[0], axes[1]);
    op.coefficients.push_back(c);
  }
  return op;
}

std::complex<double> char_poly(const DifferentialOperatorSpec& op, std::span<const double> xi) {
  require(xi.size() == op.dim, ErrorKind::shape, "frequency has the wrong dimension");
  std::complex<double> total{0.0, 0.0};
  const std::complex<double> minus_i{0.0, -1.0};
  for (std::size_t k = 0; k < op.indices.size(); ++k) {
    if (op.coefficients[k] == 0.0) continue;
    std::complex<double> term{op.coefficients[k], 0.0};
    for (std::size_t j = 0; j < op.dim; ++j)
      for (int r = 0; r < op.indices[k][j]; ++r) term *= minus_i * xi[j];
    total += term;
  }
  return total;
}

namespace {

std::string describe(const Vector& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_double(v[i]);
  return out + "]";
}

}  // namespace

TestFunction::TestFunction(Shape s, Point c, Vector r, std::string id)
    : shape_(s), centre_(std::move(c)), radii_(std::move(r)), id_(std::move(id)) {
  for (double x : radii_) require(x > 0.0, ErrorKind::domain, "test function radius must be positive");
}

TestFunction TestFunction::bump(Point centre, double radius) {
  const std::size_t d = centre.size();
  std::string id = "bump" + describe(centre) + "r" + format_double(radius);
  return TestFunction(Shape::radial, std::move(centre), Vector(d, radius), std::move(id));
}

TestFunction TestFunction::product_bump(Point centre, Vector radii) {
  require(centre.size() == radii.size(), ErrorKind::shape, "one radius per coordinate");
  std::string id = "product_bump" + describe(centre) + "r" + describe(radii);
  return TestFunction(Shape::product, std::move(centre), std::move(radii), std::move(id));
}

double TestFunction::support_radius() const noexcept {
  if (shape_ == Shape::radial) return radii_[0];
  return norm(radii_);
}

double TestFunction::value(std::span<const double> x) const {
  require(x.size() == dim(), ErrorKind::shape, "point has the wrong dimension");
  if (shape_ == Shape::radial) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) r2 += (x[i] - centre_[i]) * (x[i] - centre_[i]);
    r2 /= radii_[0] * radii_[0];
    return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
  }
  double v = 1.0;
  for (std::size_t i = 0; i < dim() && v != 0.0; ++i) v *= profile((x[i] - centre_[i]) / radii_[i]).v;
  return v;
}

Vector TestFunction::gradient(std::span<const double> x) const {
  require(x.size() == dim(), ErrorKind::shape, "point has the wrong dimension");
  const std::size_t d = dim();
  Vector g(d, 0.0);
  if (shape_ == Shape::radial) {
    const double r = radii_[0];
    Vector y(d);
    for (std::size_t i = 0; i < d; ++i) y[i] = (x[i] - centre_[i]) / r;
    const double s = 1.0 - dot(y, y);
    if (s <= 0.0) return g;
    const double val = std::exp(-1.0 / s);
    for (std::size_t i = 0; i < d; ++i) g[i] = val * (-2.0 * y[i] / (s * s)) / r;
    return g;
  }
  std::vector<Profile> p(d);
  for (std::size_t i = 0; i < d; ++i) p[i] = profile((x[i] - centre_[i]) / radii_[i]);
  for (std::size_t i = 0; i < d; ++i) {
    double v = p[i].d1 / radii_[i];
    for (std::size_t k = 0; k < d; ++k)
      if (k != i) v *= p[k].v;
    g[i] = v;
  }
  return g;
}

Matrix TestFunction::hessian(std::span<const double> x) const {
  require(x.size() == dim(), ErrorKind::shape, "point has the wrong dimension");
  const std::size_t d = dim();
  Matrix h(d);
  if (shape_ == Shape::radial) {
    const double r = radii_[0];
    Vector y(d);
    for (std::size_t i = 0; i < d; ++i) y[i] = (x[i] - centre_[i]) / r;
    const double s = 1.0 - dot(y, y);
    if (s <= 0.0) return h;
    const double g = std::exp(-1.0 / s);
    const double s2 = s * s;
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) {
        const double yy = y[j] * y[k];
        h(j, k) = g * (4.0 * yy / (s2 * s2) - (j == k ? 2.0 / s2 : 0.0) - 8.0 * yy / (s2 * s)) / (r * r);
      }
    return h;
  }
  std::vector<Profile> p(d);
  for (std::size_t i = 0; i < d; ++i) p[i] = profile((x[i] - centre_[i]) / radii_[i]);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k) {
      double v = 1.0;
      for (std::size_t i = 0; i < d; ++i) {
        if (i == j && i == k) v *= p[i].d2 / (radii_[i] * radii_[i]);
        else if (i == j || i == k) v *= p[i].d1 / radii_[i];
        else v *= p[i].v;
      }
      h(j, k) = v;
    }
  return h;
}

std::vector<TestFunction> standard_test_suite(const ParameterSpace& space) {
  const std::size_t d = space.dim;
  const double R = space.radius;
  std::vector<TestFunction> suite;
  auto along_axis = [&](double t) {
    Point c(d, 0.0);
    c[0] = t;
    return c;
  };
  suite.push_back(TestFunction::bump(along_axis(0.0), 2.0 * R));
  suite.push_back(TestFunction::bump(along_axis(0.0), R));
  suite.push_back(TestFunction::bump(along_axis(0.5 * R), 0.75 * R));
  suite.push_back(TestFunction::bump(along_axis(-0.4 * R), 1.5 * R));
  if (d >= 2) {
    Vector radii(d, 1.5 * R);
    radii[0] = R;
    suite.push_back(TestFunction::product_bump(Point(d, 0.0), radii));
    Point c(d, 0.25 * R);
    suite.push_back(TestFunction::product_bump(c, Vector(d, 0.8 * R)));
  }
  auto disjoint = TestFunction::bump(along_axis(R + 1.5), 0.5);
  suite.push_back(disjoint);
  return suite;
}

double adjoint_apply(const SpdScale& scale, const TestFunction& phi, std::span<const double> x) {
  const Matrix h = phi.hessian(x);
  const Matrix& s = scale.matrix();
  double second = 0.0;
  for (std::size_t j = 0; j < s.dim(); ++j)
    for (std::size_t k = 0; k < s.dim(); ++k) second += s(j, k) * h(j, k);
  return phi.value(x) - 0.5 * second;
}

double weak_residual(const MixtureConfig& g, const KernelFamily& k, const TestFunction& phi, std::uint64_t budget) {
  require(k.kind == KernelKind::laplace, ErrorKind::unsupported_kernel, "weak-form pairing is defined for the Laplace kernel");
  require(k.dim == g.dim() && phi.dim() == g.dim(), ErrorKind::shape, "dimensions disagree");
  const std::size_t d = g.dim();
  require(d <= 2, ErrorKind::unsupported_dimension, "weak-form quadrature supports d <= 2");
  require(budget >= 1000, ErrorKind::insufficient_budget, "weak-form quadrature needs at least 1000 nodes");
  const double det = g.scale.determinant();
  const Matrix& inv = g.scale.inverse();
  const double reach = phi.support_radius();
  const auto per_atom = static_cast<double>(budget) / static_cast<double>(g.mixing.size());
  const auto nodes = legendre_nodes();
  const auto weights = legendre_weights();

  double pairing = 0.0;
  double point_mass = 0.0;
  for (std::size_t j = 0; j < g.mixing.size(); ++j) {
    const Point& theta = g.mixing.atom(j);
    const double w = g.mixing.weight(j);
    point_mass += w * phi.value(theta);
    double integral = 0.0;
    if (d == 1) {
      // Pieces on either side of the atom are smooth.
      const double lo = phi.centre()[0] - reach;
      const double hi = phi.centre()[0] + reach;
      const auto panels = std::max<std::size_t>(1, static_cast<std::size_t>(per_atom / 40.0));
      auto f = [&](double x) {
        const double xv[1] = {x};
        const double diff = x - theta[0];
        return density_radial(k, diff * diff * inv(0, 0), det) * adjoint_apply(g.scale, phi, xv);
      };
      if (theta[0] > lo && theta[0] < hi) {
        integral = integrate_composite(f, lo, theta[0], panels) + integrate_composite(f, theta[0], hi, panels);
      } else {
        integral = integrate_composite(f, lo, hi, 2 * panels);
      }
    } else {
      // Polar coordinates about the atom with r = t^2 to absorb the logarithmic peak.
      const double dist = distance(theta, phi.centre());
      const double r_lo = std::max(0.0, dist - reach);
      const double r_hi = dist + reach;
      const double t_lo = std::sqrt(r_lo);
      const double t_hi = std::sqrt(r_hi);
      const auto radial = std::max<std::size_t>(20, static_cast<std::size_t>(std::sqrt(per_atom / 2.0)));
      const std::size_t panels = std::max<std::size_t>(1, radial / 20);
      // When the atom lies outside the support ball only a wedge of angles can contribute.
      const bool wedge = dist > reach;
      const double half = wedge ? std::asin(reach / dist) : std::numbers::pi;
      const double centre = wedge ? std::atan2(phi.centre()[1] - theta[1], phi.centre()[0] - theta[0]) : 0.0;
      const std::size_t angles = 2 * panels * 20;
      const double ht = (t_hi - t_lo) / static_cast<double>(panels);
      const double ha = 2.0 * half / static_cast<double>(angles);
      double x[2];
      double diff[2];
      for (std::size_t p = 0; p < panels; ++p)
        for (std::size_t q = 0; q < nodes.size(); ++q) {
          const double t = t_lo + (static_cast<double>(p) + 0.5 + 0.5 * nodes[q]) * ht;
          const double r = t * t;
          double ring = 0.0;
          for (std::size_t a = 0; a < angles; ++a) {
            const double phi_angle = centre - half + (static_cast<double>(a) + 0.5) * ha;
            diff[0] = r * std::cos(phi_angle);
            diff[1] = r * std::sin(phi_angle);
            x[0] = theta[0] + diff[0];
            x[1] = theta[1] + diff[1];
            const double tv = adjoint_apply(g.scale, phi, x);
            if (tv == 0.0) continue;
            ring += density_radial(k, quad_form(inv, diff), det) * tv;
          }
          integral += 0.5 * ht * weights[q] * (2.0 * t) * r * ring * ha;
        }
    }
    pairing += w * integral;
  }
  return pairing - point_mass;
}

}  // namespace mixbound
