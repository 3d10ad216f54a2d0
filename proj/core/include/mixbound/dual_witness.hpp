#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mixbound/measures.hpp"

namespace mixbound {

/// 1-Lipschitz witness known at finitely many points.
struct WitnessFunction {
  std::vector<Point> atoms;
  Vector values;
};

/// Kantorovich witness for W1(P, P') from the transport dual: values of
/// x -> min_j (|x - y_j| - v_j) on the union support, shifted so that the
/// extension vanishes at the origin.
WitnessFunction witness_from_transport(const DiscreteMeasure& p, const DiscreteMeasure& q);

/// Infimal-convolution extension min_y (h(y) + |x - y|).
double mcshane_extend(const WitnessFunction& w, std::span<const double> x);

/// Smooth radial cutoff: 1 on the ball of radius R, 0 outside radius 2R (d in {1, 2}).
double cutoff_eta(double R, std::span<const double> x);
/// sup |grad eta| for the given radius and dimension.
double cutoff_gradient_bound(double R, std::size_t d);

/// Normalized bump C^{-1} exp(-1/(1 - |x|^2)) on the unit ball.
double mollifier_psi(std::size_t d, std::span<const double> x);
double mollifier_normalizer(std::size_t d);
/// First absolute moment of the normalized bump.
double mollifier_first_moment(std::size_t d);

/// Tensor Jackson kernel (3/(8 pi sqrt d))^d prod sinc^4(x_i / (4 sqrt d)) and its Fourier transform.
double jackson_kernel(std::size_t d, std::span<const double> x);
double jackson_ft(std::size_t d, std::span<const double> xi);
/// First absolute moment of the Jackson kernel (closed form for d = 1, quadrature otherwise).
double jackson_first_moment(std::size_t d);

/// mcshane_extend * cutoff_eta.
double witness_cutoff(const WitnessFunction& w, const ParameterSpace& space, std::span<const double> x);

/// (witness_cutoff * K_Lambda)(x) with K_Lambda(y) = Lambda^d K(Lambda y); Lambda >= 1.
double bandlimit(const WitnessFunction& w, const ParameterSpace& space, double lambda, std::span<const double> x);

struct Certificate {
  double sup_gap;
  double bound;
};

/// Largest |bandlimit - witness_cutoff| on a uniform grid over [-2R, 2R]^d and
/// the bound (1 + 2 R M_eta) M_K / Lambda.
Certificate approximation_certificate(const WitnessFunction& w, const ParameterSpace& space, double lambda,
                                      std::size_t grid_size);

/// Sum of h(theta) (P - P')(d theta) for any callable h.
template <class H>
double signed_pairing(const H& h, const DiscreteMeasure& p, const DiscreteMeasure& q) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += p.weight(i) * h(p.atom(i));
  for (std::size_t j = 0; j < q.size(); ++j) total -= q.weight(j) * h(q.atom(j));
  return total;
}

}  // namespace mixbound
