#include "mixbound/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mixbound/error.hpp"

namespace mixbound {

namespace {

constexpr double kEigenSlack = 1e-12;

}  // namespace

ParameterSpace::ParameterSpace(std::size_t d, double r, double lmin, double lmax)
    : dim(d), radius(r), lambda_min(lmin), lambda_max(lmax) {
  validate();
}

void ParameterSpace::validate() const {
  require(dim >= 1, ErrorKind::shape, "dimension must be at least 1");
  require(radius > 0.0 && std::isfinite(radius), ErrorKind::domain, "radius must be positive");
  require(lambda_min > 0.0 && lambda_min < lambda_max && std::isfinite(lambda_max), ErrorKind::domain,
          "need 0 < lambda_min < lambda_max");
}

DiscreteMeasure::DiscreteMeasure(std::vector<Point> atoms, std::vector<double> weights, const ParameterSpace& space)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  require(!atoms_.empty(), ErrorKind::degenerate_measure, "measure needs at least one atom");
  require(atoms_.size() == weights_.size(), ErrorKind::shape, "atoms and weights differ in length");
  double total = 0.0;
  for (std::size_t j = 0; j < atoms_.size(); ++j) {
    require(atoms_[j].size() == space.dim, ErrorKind::shape,
            "atom " + std::to_string(j) + " has dimension " + std::to_string(atoms_[j].size()));
    for (double x : atoms_[j]) require(std::isfinite(x), ErrorKind::shape, "non-finite atom coordinate");
    require(std::isfinite(weights_[j]) && weights_[j] >= 0.0, ErrorKind::shape, "negative or non-finite weight");
    require(norm(atoms_[j]) <= space.radius * (1.0 + 1e-12), ErrorKind::support_violation,
            "atom " + std::to_string(j) + " lies outside the ball of radius " + std::to_string(space.radius));
  }
  // Summing in sorted order makes the normalized weights independent of atom order.
  std::vector<double> sorted = weights_;
  std::sort(sorted.begin(), sorted.end());
  for (double w : sorted) total += w;
  require(total > 0.0, ErrorKind::degenerate_measure, "all weights are zero");
  for (double& w : weights_) w /= total;
}

DiscreteMeasure DiscreteMeasure::dirac(Point atom, const ParameterSpace& space) {
  return DiscreteMeasure({std::move(atom)}, {1.0}, space);
}

DiscreteMeasure DiscreteMeasure::shifted(std::span<const double> shift, const ParameterSpace& space) const {
  std::vector<Point> moved = atoms_;
  for (auto& a : moved) {
    require(a.size() == shift.size(), ErrorKind::shape, "shift dimension mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += shift[i];
  }
  return DiscreteMeasure(std::move(moved), weights_, space);
}

SpdScale::SpdScale(const Matrix& m, const ParameterSpace& space) {
  require(m.dim() == space.dim, ErrorKind::shape,
          "scale matrix has dimension " + std::to_string(m.dim()) + ", space has " + std::to_string(space.dim));
  for (double x : m.data()) require(std::isfinite(x), ErrorKind::shape, "non-finite scale entry");
  matrix_ = m.symmetrized();
  eig_ = jacobi_eigen(matrix_);
  for (double ev : eig_.values) {
    require(ev >= space.lambda_min - kEigenSlack && ev <= space.lambda_max + kEigenSlack, ErrorKind::eigenvalue_box,
            "eigenvalue " + std::to_string(ev) + " outside [" + std::to_string(space.lambda_min) + ", " +
                std::to_string(space.lambda_max) + "]");
  }
  inverse_ = spectral_apply(eig_, [](double l) { return 1.0 / l; });
  sqrt_ = spectral_apply(eig_, [](double l) { return std::sqrt(l); });
}

SpdScale SpdScale::isotropic(double sigma2, const ParameterSpace& space) {
  return SpdScale(Matrix::identity(space.dim, sigma2), space);
}

double SpdScale::determinant() const {
  double det = 1.0;
  for (double l : eig_.values) det *= l;
  return det;
}

MixtureConfig::MixtureConfig(DiscreteMeasure p, SpdScale s, ParameterSpace sp)
    : mixing(std::move(p)), scale(std::move(s)), space(sp) {
  require(mixing.dim() == space.dim && scale.dim() == space.dim, ErrorKind::shape,
          "mixing measure, scale and space disagree on dimension");
}

double operator_norm(const Matrix& symmetric) {
  const auto eig = jacobi_eigen(symmetric);
  double m = 0.0;
  for (double l : eig.values) m = std::max(m, std::abs(l));
  return m;
}

double operator_norm_distance(const SpdScale& a, const SpdScale& b) {
  require(a.dim() == b.dim(), ErrorKind::shape, "scale dimension mismatch");
  if (a.matrix() == b.matrix()) return 0.0;
  return operator_norm(a.matrix() - b.matrix());
}

nlohmann::json to_json(const DiscreteMeasure& p) {
  return nlohmann::json{{"atoms", p.atoms()}, {"weights", p.weights()}};
}

nlohmann::json to_json(const SpdScale& s) { return nlohmann::json{{"matrix", s.matrix().rows()}}; }

nlohmann::json to_json(const ParameterSpace& s) {
  return nlohmann::json{{"dim", s.dim}, {"R", s.radius}, {"lambda_min", s.lambda_min}, {"lambda_max", s.lambda_max}};
}

nlohmann::json to_json(const MixtureConfig& g) {
  return nlohmann::json{{"mixing", to_json(g.mixing)}, {"scale", to_json(g.scale)}, {"space", to_json(g.space)}};
}

DiscreteMeasure measure_from_json(const nlohmann::json& j, const ParameterSpace& space) {
  require(j.is_object() && j.contains("atoms") && j.contains("weights"), ErrorKind::shape,
          "measure JSON needs \"atoms\" and \"weights\"");
  std::vector<Point> atoms;
  for (const auto& a : j.at("atoms")) {
    if (a.is_number()) atoms.push_back({a.get<double>()});
    else atoms.push_back(a.get<Point>());
  }
  return DiscreteMeasure(std::move(atoms), j.at("weights").get<std::vector<double>>(), space);
}

SpdScale scale_from_json(const nlohmann::json& j, const ParameterSpace& space) {
  require(j.is_object() && j.contains("matrix"), ErrorKind::shape, "scale JSON needs \"matrix\"");
  const auto& m = j.at("matrix");
  if (m.is_number()) return SpdScale(Matrix::identity(1, m.get<double>()), space);
  return SpdScale(Matrix::from_rows(m.get<std::vector<std::vector<double>>>()), space);
}

ParameterSpace space_from_json(const nlohmann::json& j) {
  ParameterSpace s;
  s.dim = j.value("dim", std::size_t{1});
  s.radius = j.value("R", 1.0);
  s.lambda_min = j.value("lambda_min", 0.5);
  s.lambda_max = j.value("lambda_max", 2.0);
  s.validate();
  return s;
}

}  // namespace mixbound
