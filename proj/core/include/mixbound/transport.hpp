#pragma once

#include <cstddef>
#include <vector>

#include "mixbound/measures.hpp"

namespace mixbound {

struct TransportPlan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> flow;  // row-major rows x cols
  double cost = 0.0;
  Vector u;  // source potentials
  Vector v;  // target potentials

  double at(std::size_t i, std::size_t j) const { return flow[i * cols + j]; }
};

/// Exact W1 on the line from the CDF difference.
double w1_1d(const DiscreteMeasure& p, const DiscreteMeasure& q);

/// Exact W1 with Euclidean ground cost: transportation simplex with a
/// north-west corner start and Bland's rule. Atoms are processed in a canonical
/// lexicographic order, so relabelling the inputs does not change the cost bits.
/// Potentials satisfy u_i + v_j <= |x_i - y_j| with equality on the support of
/// the plan, and are shifted so that u vanishes at the first canonical source atom.
TransportPlan w1_exact(const DiscreteMeasure& p, const DiscreteMeasure& q);

/// W1(P, P') + |S - S'|_op.
double product_w1(const MixtureConfig& g, const MixtureConfig& gp);

inline constexpr std::size_t kMaxTransportCells = 1'000'000;

}  // namespace mixbound
