#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mixbound/density_metrics.hpp"
#include "mixbound/kernels.hpp"
#include "mixbound/measures.hpp"
#include "mixbound/random.hpp"

namespace mixbound {

enum class BoundRegime { super_smooth, ordinary_smooth, pde_inversion, kernel_specific };

/// Abstract constants of the lower bounds; unit defaults where only existence is known.
struct BoundSpec {
  BoundRegime regime = BoundRegime::kernel_specific;
  double C = 1.0;
  double C_tilde = 1.0;
  double C_prime = 1.0;
  double M = 1.0;
  double alpha = 2.0;
  double beta = 2.0;
  double p = 2.0;
  double d = 1.0;

  /// Regime constants (alpha / beta / p / d) filled from the kernel.
  static BoundSpec for_kernel(BoundRegime regime, const KernelFamily& k);
  void validate() const;
};

double bound_supersmooth(const BoundSpec& spec, const KernelFamily& k, double w1, double dsig);
double bound_ordinary(const BoundSpec& spec, const KernelFamily& k, double w1, double dsig);
double bound_pde(const BoundSpec& spec, const KernelFamily& k, double w1, double dsig);
/// Kernel-specific closed forms (Gaussian general / isotropic, Cauchy, Laplace).
double bound_kernel(const KernelFamily& k, double w1, double dsig, const BoundSpec& constants = {});

struct RateTriple {
  double l1;
  double w1;
  double sigma;
};

/// Published posterior rates at sample size n, natural logarithms.
RateTriple theoretical_rate(const KernelFamily& k, std::uint64_t n);

struct FuzzRecord {
  std::uint64_t trial = 0;
  double w1 = 0.0;
  double dsig = 0.0;
  double l1 = 0.0;
  double l1_stderr = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct FuzzReport {
  std::uint64_t trials = 0;
  double min_ratio = 0.0;
  nlohmann::json argmin_pair;
  double fitted_constant = 0.0;
  std::uint64_t violations = 0;
  std::uint64_t rejections = 0;
  std::vector<FuzzRecord> records;
};

using MixturePair = std::pair<MixtureConfig, MixtureConfig>;
using PairSampler = std::function<MixturePair(CounterRng&)>;

/// Random admissible mixture: 1..atoms_max atoms uniform in the ball of radius
/// 0.95 R, Dirichlet(1) weights, eigenvalues uniform in the shrunken box with a
/// random rotation (isotropic kernels draw a single sigma^2).
MixtureConfig sample_admissible(const KernelFamily& k, const ParameterSpace& space, std::size_t atoms_max,
                                CounterRng& rng);

/// Ratio l1 / bound_kernel (unit constants) over random pairs; identical pairs
/// and pairs outside the bound's domain are redrawn and counted as rejections.
FuzzReport fuzz_inverse_bound(const KernelFamily& k, const ParameterSpace& space, std::uint64_t trials,
                              std::size_t atoms_max, std::uint64_t budget, std::uint64_t seed);
FuzzReport fuzz_inverse_bound(const KernelFamily& k, const ParameterSpace& space, std::uint64_t trials,
                              std::uint64_t budget, std::uint64_t seed, const PairSampler& sampler);

/// Least-squares slope of y on x.
double ls_slope(std::span<const double> x, std::span<const double> y);

struct ProfilePoint {
  double step;
  double l1;
};

/// l1 between (P, S) and (P, S + t D) for each t, D a fixed unit-norm direction.
std::vector<ProfilePoint> scale_only_profile(const KernelFamily& k, const MixtureConfig& g, const Matrix& direction,
                                             std::span<const double> steps, std::uint64_t budget);
/// l1 between (P, S) and (P shifted by t u, S) for each t.
std::vector<ProfilePoint> location_only_profile(const KernelFamily& k, const MixtureConfig& g,
                                                std::span<const double> unit_shift, std::span<const double> steps,
                                                std::uint64_t budget);
/// Slope of log l1 against log step.
double loglog_slope(std::span<const ProfilePoint> profile);

}  // namespace mixbound
