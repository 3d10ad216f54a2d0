#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mixbound {

using Vector = std::vector<double>;

/// Dense square matrix, row-major. Dimensions here are small (d <= ~10).
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
  Matrix(std::size_t n, std::vector<double> row_major);

  static Matrix identity(std::size_t n, double scale = 1.0);
  static Matrix diagonal(std::span<const double> diag);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t dim() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> data() const noexcept { return data_; }
  std::vector<std::vector<double>> rows() const;

  Matrix transpose() const;
  Matrix symmetrized() const;

  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double s, const Matrix& a);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

Vector operator*(const Matrix& a, std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double distance(std::span<const double> a, std::span<const double> b);
double quad_form(const Matrix& a, std::span<const double> v);
double max_abs_entry(const Matrix& a);
double frobenius_norm(const Matrix& a);

struct SymmetricEigen {
  Vector values;  // descending
  Matrix vectors; // columns are eigenvectors
};

/// Cyclic Jacobi rotations with a fixed sweep order; stops once the
/// off-diagonal Frobenius norm drops below `tol` (relative to the matrix norm).
SymmetricEigen jacobi_eigen(const Matrix& symmetric, double tol = 1e-12, int max_sweeps = 100);

/// Q f(Lambda) Q^T for a symmetric eigendecomposition.
template <class F>
Matrix spectral_apply(const SymmetricEigen& eig, F&& f) {
  const std::size_t n = eig.values.size();
  Matrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(eig.values[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += eig.vectors(i, k) * fk * eig.vectors(j, k);
  }
  return out;
}

}  // namespace mixbound
