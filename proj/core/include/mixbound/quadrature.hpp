#pragma once

#include <functional>
#include <span>
#include <vector>

namespace mixbound {

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (31 points) on [a, b]; infinite limits are mapped.
double integrate_adaptive(const Integrand& f, double a, double b, double tol = 1e-10, unsigned max_depth = 15,
                          double* error = nullptr);

/// Adaptive Gauss-Kronrod over consecutive intervals of sorted breakpoints, aiming at an
/// absolute error of tol times the L1 mass of f over the whole range.
double integrate_adaptive(const Integrand& f, std::span<const double> breaks, double tol = 1e-10,
                          unsigned max_depth = 15);

/// Composite 20-point Gauss-Legendre with `panels` equal panels.
double integrate_composite(const Integrand& f, double a, double b, std::size_t panels);

/// Nodes and weights of the 20-point Gauss-Legendre rule on [-1, 1].
std::span<const double> legendre_nodes();
std::span<const double> legendre_weights();

/// Sorted, deduplicated copy of `points` clipped to [lo, hi] with lo and hi included.
std::vector<double> breakpoints(std::vector<double> points, double lo, double hi);

}  // namespace mixbound
