#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mixbound/density_metrics.hpp"
#include "mixbound/dp_prior.hpp"
#include "mixbound/kernels.hpp"
#include "mixbound/measures.hpp"

namespace mixbound {

struct PosteriorDraw {
  DiscreteMeasure mixing;
  SpdScale scale;
  std::uint64_t iteration = 0;
  std::size_t occupied = 0;
  double leading_weight = 0.0;  // first stick weight
  double w1_to_truth = 0.0;
  double dsig_to_truth = 0.0;
  L1Estimate l1_to_truth{};
};

struct SamplerSettings {
  std::uint64_t iters = 3000;
  std::uint64_t burn_in = 1000;
  std::uint64_t thin = 1;
  std::uint64_t seed = 0;
  std::uint64_t l1_budget = 20000;
  /// Target acceptance rate for the scale random walk during burn-in tuning.
  double target_acceptance = 0.3;
};

struct SamplerRun {
  std::vector<PosteriorDraw> draws;
  double scale_acceptance = 0.0;     // post burn-in
  double location_acceptance = 0.0;  // Laplace atom moves, post burn-in; 1 for Gibbs updates
  bool acceptance_warning = false;   // either rate outside (0.05, 0.95)
};

/// Slice sampler for the stick-breaking DP mixture with a shared scale. Supported
/// kernels: gaussian, gaussian-iso, laplace (d = 1). The base measure must be a
/// UniformBall. When `truth` is given every draw carries its distances to it.
SamplerRun run_sampler(std::span<const Point> data, const KernelFamily& k, const DpConfig& dp,
                       const ParameterSpace& space, const SamplerSettings& settings,
                       const std::optional<MixtureConfig>& truth = std::nullopt);

struct ContractionRow {
  std::uint64_t n = 0;
  std::uint64_t replicate = 0;
  double median_w1 = 0.0;
  double q90_w1 = 0.0;
  double median_dsig = 0.0;
  double median_l1 = 0.0;
  bool acceptance_warning = false;
};

struct ContractionTable {
  std::vector<ContractionRow> rows;  // sorted by (n, replicate)
};

/// Type-7 sample quantile.
double quantile(std::vector<double> values, double q);

/// For every (n, replicate): simulate data from G0, run the sampler, and summarise
/// the posterior distances. Seeds are derived from (seed, n index, replicate).
ContractionTable contraction_experiment(const KernelFamily& k, const MixtureConfig& g0,
                                        std::span<const std::uint64_t> n_grid, std::uint64_t replicates,
                                        const DpConfig& dp, const SamplerSettings& settings);

struct RateCurveRow {
  std::uint64_t n;
  double mean_log_w1;
  double mean_log_dsig;
  double mean_log_l1;
  double theory_w1;
  double theory_dsig;
  double theory_l1;
};

struct RateFit {
  /// Slopes of log(median) against log n.
  double slope_w1 = 0.0;
  double slope_dsig = 0.0;
  double slope_l1 = 0.0;
  /// Slopes after removing the slowly varying factor of each rate, so an exact rate
  /// recovers its leading exponent. Laplace: all three against log n. Gaussian: w1
  /// against log log n (isotropic) or log log log n, dsig against log log n, l1
  /// against log n.
  double corrected_slope_w1 = 0.0;
  double corrected_slope_dsig = 0.0;
  double corrected_slope_l1 = 0.0;
  bool has_theory = false;
  std::vector<RateCurveRow> curve;
};

/// L1 columns and slopes are NaN when any L1 median is zero (per-draw L1 disabled).
RateFit rate_fit(const ContractionTable& table, const KernelFamily& k);

}  // namespace mixbound
