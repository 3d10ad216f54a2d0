#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"
#include "mixbound/linalg.hpp"

namespace mixbound {

using Point = Vector;

/// The constrained parameter set: locations in the closed ball of radius R,
/// scale matrices with spectrum inside [lambda_min, lambda_max].
struct ParameterSpace {
  std::size_t dim = 1;
  double radius = 1.0;
  double lambda_min = 0.5;
  double lambda_max = 2.0;

  ParameterSpace() = default;
  ParameterSpace(std::size_t d, double r, double lmin, double lmax);

  void validate() const;
  friend bool operator==(const ParameterSpace&, const ParameterSpace&) = default;
};

/// Finitely supported probability measure on R^d. Immutable after construction.
class DiscreteMeasure {
 public:
  /// Weights are rescaled to sum to one. Throws support_violation,
  /// degenerate_measure or shape errors.
  DiscreteMeasure(std::vector<Point> atoms, std::vector<double> weights, const ParameterSpace& space);

  /// Unit-mass Dirac at `atom`.
  static DiscreteMeasure dirac(Point atom, const ParameterSpace& space);

  std::size_t size() const noexcept { return atoms_.size(); }
  std::size_t dim() const noexcept { return atoms_.front().size(); }
  const std::vector<Point>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const Point& atom(std::size_t j) const { return atoms_[j]; }
  double weight(std::size_t j) const { return weights_[j]; }

  /// Same measure with every atom moved by `shift` (still validated against `space`).
  DiscreteMeasure shifted(std::span<const double> shift, const ParameterSpace& space) const;

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

 private:
  std::vector<Point> atoms_;
  std::vector<double> weights_;
};

/// Symmetric positive-definite scale with cached spectrum.
class SpdScale {
 public:
  /// Symmetrizes, eigendecomposes and checks the eigenvalue box.
  SpdScale(const Matrix& m, const ParameterSpace& space);

  static SpdScale isotropic(double sigma2, const ParameterSpace& space);

  std::size_t dim() const noexcept { return matrix_.dim(); }
  const Matrix& matrix() const noexcept { return matrix_; }
  const Vector& eigenvalues() const noexcept { return eig_.values; }
  const Matrix& eigenvectors() const noexcept { return eig_.vectors; }
  double determinant() const;
  const Matrix& inverse() const noexcept { return inverse_; }
  /// Symmetric square root Sigma^{1/2}.
  const Matrix& sqrt() const noexcept { return sqrt_; }

  friend bool operator==(const SpdScale& a, const SpdScale& b) { return a.matrix_ == b.matrix_; }

 private:
  Matrix matrix_;
  SymmetricEigen eig_;
  Matrix inverse_;
  Matrix sqrt_;
};

struct MixtureConfig {
  DiscreteMeasure mixing;
  SpdScale scale;
  ParameterSpace space;

  MixtureConfig(DiscreteMeasure p, SpdScale s, ParameterSpace sp);
  std::size_t dim() const noexcept { return space.dim; }
};

/// Largest absolute eigenvalue of a - b.
double operator_norm_distance(const SpdScale& a, const SpdScale& b);
double operator_norm(const Matrix& symmetric);

// JSON: {"atoms": [[...],...], "weights": [...]} and {"matrix": [[...],...]}.
nlohmann::json to_json(const DiscreteMeasure& p);
nlohmann::json to_json(const SpdScale& s);
nlohmann::json to_json(const ParameterSpace& s);
nlohmann::json to_json(const MixtureConfig& g);
DiscreteMeasure measure_from_json(const nlohmann::json& j, const ParameterSpace& space);
SpdScale scale_from_json(const nlohmann::json& j, const ParameterSpace& space);
ParameterSpace space_from_json(const nlohmann::json& j);

}  // namespace mixbound
