#include "mixbound/posterior.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "mixbound/bounds.hpp"
#include "mixbound/error.hpp"
#include "mixbound/parallel.hpp"
#include "mixbound/random.hpp"
#include "mixbound/transport.hpp"

namespace mixbound {

namespace {

constexpr std::uint64_t kTuneBatch = 50;
constexpr int kScaleStepsPerSweep = 5;

double fold(double x, double lo, double hi) {
  const double w = hi - lo;
  double y = std::fmod(x - lo, 2.0 * w);
  if (y < 0.0) y += 2.0 * w;
  return y <= w ? lo + y : hi - (y - w);
}

double truncated_normal(double mu, double sd, double a, double b, CounterRng& rng) {
  const boost::math::normal_distribution<double> std_normal;
  const double za = (a - mu) / sd;
  const double zb = (b - mu) / sd;
  const double u = rng.uniform_open();
  double z;
  if (za > 0.0) {
    const double qa = boost::math::cdf(boost::math::complement(std_normal, za));
    const double qb = boost::math::cdf(boost::math::complement(std_normal, zb));
    if (qa < 1e-300) {
      z = za + rng.exponential() / za;
    } else {
      const double p = std::max(qa - u * (qa - qb), 1e-300);
      z = boost::math::quantile(boost::math::complement(std_normal, p));
    }
  } else {
    const double pa = boost::math::cdf(std_normal, za);
    const double pb = boost::math::cdf(std_normal, zb);
    if (pb < 1e-300) {
      z = zb - rng.exponential() / -zb;
    } else {
      const double p = std::clamp(pa + u * (pb - pa), 1e-300, 1.0 - 1e-16);
      z = boost::math::quantile(std_normal, p);
    }
  }
  return mu + sd * std::clamp(z, za, zb);
}

Vector stick_weights(const std::vector<double>& sticks) {
  Vector w(sticks.size());
  double rest = 1.0;
  for (std::size_t j = 0; j < sticks.size(); ++j) {
    w[j] = rest * sticks[j];
    rest *= 1.0 - sticks[j];
  }
  return w;
}

// Log kernel density with the scale's inverse and log-determinant hoisted.
struct ScaleCache {
  Matrix inverse;
  double log_det = 0.0;

  explicit ScaleCache(const Matrix& s) {
    const auto eig = jacobi_eigen(s);
    inverse = spectral_apply(eig, [](double l) { return 1.0 / l; });
    for (double l : eig.values) log_det += std::log(l);
  }
};

double log_kernel(const KernelFamily& k, std::span<const double> x, std::span<const double> theta,
                  const ScaleCache& c) {
  const std::size_t d = k.dim;
  if (k.kind == KernelKind::laplace) {
    // univariate: scale is the variance-like parameter sigma
    const double sigma = 1.0 / c.inverse(0, 0);
    return -0.5 * std::log(2.0 * sigma) - std::sqrt(2.0 / sigma) * std::abs(x[0] - theta[0]);
  }
  double q = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) q += (x[i] - theta[i]) * c.inverse(i, j) * (x[j] - theta[j]);
  return -0.5 * q - 0.5 * c.log_det - 0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi);
}

class SliceSampler {
 public:
  SliceSampler(std::span<const Point> data, const KernelFamily& k, const DpConfig& dp, const ParameterSpace& space,
               const SamplerSettings& settings)
      : data_(data), k_(k), dp_(dp), space_(space), settings_(settings), rng_(settings.seed, 0x5a17) {
    base_radius_ = std::get<UniformBall>(dp.base).radius;
    const std::size_t d = space.dim;
    scale_ = Matrix::identity(d, 0.5 * (space.lambda_min + space.lambda_max));
    step_ = 0.1 * (space.lambda_max - space.lambda_min);
    if (k_.kind == KernelKind::gaussian) step_ = 0.1;  // log-scale coordinates
    location_step_ = 0.2 * space.radius;
    Point start(d, 0.0);
    if (!data_.empty()) {
      for (const auto& x : data_)
        for (std::size_t i = 0; i < d; ++i) start[i] += x[i] / static_cast<double>(data_.size());
      const double r = norm(start);
      if (r > base_radius_)
        for (auto& v : start) v *= base_radius_ / r;
    }
    sticks_.push_back(rng_.beta(1.0, dp_.concentration));
    atoms_.push_back(start);
    labels_.assign(data_.size(), 0);
  }

  void sweep(bool tuning) {
    update_sticks();
    update_atoms();
    extend_and_assign();
    for (int s = 0; s < kScaleStepsPerSweep; ++s) update_scale(tuning);
  }

  PosteriorDraw snapshot(std::uint64_t iteration) const {
    const Vector w = stick_weights(sticks_);
    std::vector<std::size_t> counts(atoms_.size(), 0);
    for (std::size_t c : labels_) ++counts[c];
    std::vector<Point> atoms;
    std::vector<double> weights;
    for (std::size_t j = 0; j < atoms_.size(); ++j) {
      if (!data_.empty() && counts[j] == 0) continue;
      atoms.push_back(atoms_[j]);
      weights.push_back(w[j]);
    }
    PosteriorDraw draw{DiscreteMeasure(std::move(atoms), std::move(weights), space_), SpdScale(scale_, space_)};
    draw.iteration = iteration;
    draw.occupied = draw.mixing.size();
    draw.leading_weight = w[0];
    return draw;
  }

  double scale_acceptance() const { return scale_trials_ ? double(scale_accepts_) / double(scale_trials_) : 1.0; }
  double location_acceptance() const {
    return location_trials_ ? double(location_accepts_) / double(location_trials_) : 1.0;
  }
  void reset_counters() {
    scale_accepts_ = scale_trials_ = location_accepts_ = location_trials_ = 0;
  }

 private:
  void update_sticks() {
    std::size_t used = 1;
    for (std::size_t c : labels_) used = std::max(used, c + 1);
    std::vector<std::size_t> counts(used, 0);
    for (std::size_t c : labels_) ++counts[c];
    sticks_.resize(used);
    atoms_.resize(used);
    std::size_t beyond = data_.size();
    for (std::size_t j = 0; j < used; ++j) {
      beyond -= counts[j];
      sticks_[j] = rng_.beta(1.0 + static_cast<double>(counts[j]), dp_.concentration + static_cast<double>(beyond));
    }
    // Keep every stick strictly inside (0, 1) so the remaining mass stays positive.
    for (auto& v : sticks_) v = std::clamp(v, 1e-300, 1.0 - 1e-16);
  }

  void update_atoms() {
    const std::size_t d = space_.dim;
    const std::size_t K = atoms_.size();
    std::vector<std::vector<std::size_t>> members(K);
    for (std::size_t i = 0; i < labels_.size(); ++i) members[labels_[i]].push_back(i);
    const ScaleCache cache(scale_);
    for (std::size_t j = 0; j < K; ++j) {
      if (members[j].empty()) {
        atoms_[j] = rng_.uniform_ball(d, base_radius_);
        continue;
      }
      if (k_.kind == KernelKind::laplace) {
        laplace_atom_move(j, members[j], cache);
        continue;
      }
      Vector mean(d, 0.0);
      for (std::size_t i : members[j])
        for (std::size_t a = 0; a < d; ++a) mean[a] += data_[i][a];
      const double n = static_cast<double>(members[j].size());
      for (auto& m : mean) m /= n;
      // Coordinate-wise Gibbs for N(mean, S / n) restricted to the ball.
      for (std::size_t a = 0; a < d; ++a) {
        const double prec = n * cache.inverse(a, a);
        double shift = 0.0;
        double others = 0.0;
        for (std::size_t b = 0; b < d; ++b) {
          if (b == a) continue;
          shift += n * cache.inverse(a, b) * (atoms_[j][b] - mean[b]);
          others += atoms_[j][b] * atoms_[j][b];
        }
        const double half = std::sqrt(std::max(0.0, base_radius_ * base_radius_ - others));
        atoms_[j][a] = truncated_normal(mean[a] - shift / prec, 1.0 / std::sqrt(prec), -half, half, rng_);
      }
    }
  }

  void laplace_atom_move(std::size_t j, const std::vector<std::size_t>& members, const ScaleCache& cache) {
    const double current = atoms_[j][0];
    const double proposal = fold(current + location_step_ * rng_.normal(), -base_radius_, base_radius_);
    const double prop[1] = {proposal};
    double delta = 0.0;
    for (std::size_t i : members) delta += log_kernel(k_, data_[i], prop, cache) - log_kernel(k_, data_[i], atoms_[j], cache);
    ++location_trials_;
    if (std::log(rng_.uniform_open()) < delta) {
      atoms_[j][0] = proposal;
      ++location_accepts_;
    }
  }

  void extend_and_assign() {
    if (data_.empty()) return;
    Vector w = stick_weights(sticks_);
    std::vector<double> slice(data_.size());
    double lowest = 1.0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
      slice[i] = rng_.uniform_open() * w[labels_[i]];
      lowest = std::min(lowest, slice[i]);
    }
    double covered = 0.0;
    for (double x : w) covered += x;
    while (covered < 1.0 - lowest && sticks_.size() < 100000) {
      const double rest = 1.0 - covered;
      const double v = std::clamp(rng_.beta(1.0, dp_.concentration), 1e-300, 1.0 - 1e-16);
      sticks_.push_back(v);
      atoms_.push_back(rng_.uniform_ball(space_.dim, base_radius_));
      w.push_back(rest * v);
      covered += rest * v;
    }
    const ScaleCache cache(scale_);
    std::vector<double> logp(atoms_.size());
    std::vector<double> prob(atoms_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < atoms_.size(); ++j) {
        logp[j] = w[j] > slice[i] ? log_kernel(k_, data_[i], atoms_[j], cache) : -std::numeric_limits<double>::infinity();
        best = std::max(best, logp[j]);
      }
      if (!std::isfinite(best)) continue;
      for (std::size_t j = 0; j < atoms_.size(); ++j) prob[j] = std::isfinite(logp[j]) ? std::exp(logp[j] - best) : 0.0;
      labels_[i] = rng_.categorical(prob);
    }
  }

  // Sufficient statistics of the residuals x_i - theta_{c_i}.
  double scale_log_likelihood(const Matrix& s) const {
    const double n = static_cast<double>(data_.size());
    if (data_.empty()) return 0.0;
    if (k_.kind == KernelKind::laplace) {
      const double sigma = s(0, 0);
      double abs_sum = 0.0;
      for (std::size_t i = 0; i < data_.size(); ++i) abs_sum += std::abs(data_[i][0] - atoms_[labels_[i]][0]);
      return -0.5 * n * std::log(2.0 * sigma) - std::sqrt(2.0 / sigma) * abs_sum;
    }
    const ScaleCache cache(s);
    double q = 0.0;
    const std::size_t d = space_.dim;
    for (std::size_t i = 0; i < data_.size(); ++i)
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
          q += (data_[i][a] - atoms_[labels_[i]][a]) * cache.inverse(a, b) * (data_[i][b] - atoms_[labels_[i]][b]);
    return -0.5 * q - 0.5 * n * cache.log_det;
  }

  bool in_box(const Matrix& s) const {
    const auto eig = jacobi_eigen(s);
    return eig.values.back() >= space_.lambda_min && eig.values.front() <= space_.lambda_max;
  }

  void update_scale(bool tuning) {
    const std::size_t d = space_.dim;
    Matrix proposal;
    if (k_.kind == KernelKind::gaussian) {
      const auto eig = jacobi_eigen(scale_);
      Matrix log_s = spectral_apply(eig, [](double l) { return std::log(l); });
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
          const double z = rng_.normal() * step_ * (a == b ? 1.0 : std::numbers::sqrt2 / 2.0);
          log_s(a, b) += z;
          if (a != b) log_s(b, a) += z;
        }
      proposal = spectral_apply(jacobi_eigen(log_s), [](double l) { return std::exp(l); });
    } else {
      const double v = fold(scale_(0, 0) + step_ * rng_.normal(), space_.lambda_min, space_.lambda_max);
      proposal = Matrix::identity(d, v);
    }
    ++scale_trials_;
    ++batch_trials_;
    if (in_box(proposal)) {
      const double delta = scale_log_likelihood(proposal) - scale_log_likelihood(scale_);
      if (std::log(rng_.uniform_open()) < delta) {
        scale_ = proposal;
        ++scale_accepts_;
        ++batch_accepts_;
      }
    }
    if (tuning && batch_trials_ == kTuneBatch) {
      const double rate = double(batch_accepts_) / double(batch_trials_);
      const double cap = k_.kind == KernelKind::gaussian ? 10.0 : 10.0 * (space_.lambda_max - space_.lambda_min);
      step_ = std::clamp(step_ * std::exp(rate - settings_.target_acceptance), 1e-8, cap);
      batch_trials_ = batch_accepts_ = 0;
    }
  }

  std::span<const Point> data_;
  KernelFamily k_;
  DpConfig dp_;
  ParameterSpace space_;
  SamplerSettings settings_;
  CounterRng rng_;
  double base_radius_ = 1.0;
  std::vector<double> sticks_;
  std::vector<Point> atoms_;
  std::vector<std::size_t> labels_;
  Matrix scale_;
  double step_ = 0.1;
  double location_step_ = 0.2;
  std::uint64_t scale_accepts_ = 0;
  std::uint64_t scale_trials_ = 0;
  std::uint64_t batch_accepts_ = 0;
  std::uint64_t batch_trials_ = 0;
  std::uint64_t location_accepts_ = 0;
  std::uint64_t location_trials_ = 0;
};

}  // namespace

SamplerRun run_sampler(std::span<const Point> data, const KernelFamily& k, const DpConfig& dp,
                       const ParameterSpace& space, const SamplerSettings& settings,
                       const std::optional<MixtureConfig>& truth) {
  require(settings.iters >= 1, ErrorKind::precondition, "sampler needs at least one iteration");
  require(settings.burn_in < settings.iters, ErrorKind::precondition, "burn-in must be shorter than the run");
  require(settings.thin >= 1, ErrorKind::precondition, "thinning interval must be positive");
  require(k.dim == space.dim, ErrorKind::shape, "kernel and space dimensions differ");
  require(k.kind != KernelKind::cauchy, ErrorKind::unsupported_kernel, "posterior sampling is not offered for Cauchy mixtures");
  require(k.kind != KernelKind::laplace || k.dim == 1, ErrorKind::unsupported_dimension,
          "Laplace posterior sampling is univariate");
  require(std::holds_alternative<UniformBall>(dp.base), ErrorKind::precondition, "sampler needs a uniform base measure");
  dp.validate(space);
  for (const auto& x : data) require(x.size() == space.dim, ErrorKind::shape, "data point has the wrong dimension");
  if (truth) {
    require(truth->space == space, ErrorKind::shape, "truth lives in a different parameter space");
    k.check_scale(truth->scale);
  }

  SliceSampler sampler(data, k, dp, space, settings);
  SamplerRun run;
  for (std::uint64_t it = 0; it < settings.iters; ++it) {
    const bool tuning = it < settings.burn_in;
    if (it == settings.burn_in) sampler.reset_counters();
    sampler.sweep(tuning);
    if (tuning || (it - settings.burn_in) % settings.thin != 0) continue;
    PosteriorDraw draw = sampler.snapshot(it);
    if (truth) {
      draw.w1_to_truth = w1_exact(draw.mixing, truth->mixing).cost;
      draw.dsig_to_truth = operator_norm_distance(draw.scale, truth->scale);
      if (settings.l1_budget > 0) {
        const MixtureConfig g(draw.mixing, draw.scale, space);
        draw.l1_to_truth = l1_distance(g, *truth, k, settings.l1_budget, derive_seed(settings.seed, 0x11, it),
                                       L1Method::importance_mc);
      }
    }
    run.draws.push_back(std::move(draw));
  }
  run.scale_acceptance = sampler.scale_acceptance();
  run.location_acceptance = sampler.location_acceptance();
  auto outside = [](double r) { return r <= 0.05 || r >= 0.95; };
  run.acceptance_warning = outside(run.scale_acceptance) || (k.kind == KernelKind::laplace && outside(run.location_acceptance));
  return run;
}

double quantile(std::vector<double> values, double q) {
  require(!values.empty(), ErrorKind::precondition, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ContractionTable contraction_experiment(const KernelFamily& k, const MixtureConfig& g0,
                                        std::span<const std::uint64_t> n_grid, std::uint64_t replicates,
                                        const DpConfig& dp, const SamplerSettings& settings) {
  require(!n_grid.empty(), ErrorKind::precondition, "sample-size grid is empty");
  require(replicates >= 1, ErrorKind::precondition, "need at least one replicate");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    require(n_grid[i] >= 50, ErrorKind::precondition, "sample sizes must be at least 50");
    require(i == 0 || n_grid[i] > n_grid[i - 1], ErrorKind::precondition, "sample sizes must increase");
  }
  const std::size_t jobs = n_grid.size() * replicates;
  std::vector<ContractionRow> rows(jobs);
  parallel_for(jobs, [&](std::size_t job) {
    const std::size_t ni = job / replicates;
    const std::uint64_t rep = job % replicates;
    const std::uint64_t n = n_grid[ni];
    const Dataset data = sample_dataset(g0, k, n, derive_seed(settings.seed, 0xda7a, job));
    SamplerSettings local = settings;
    local.seed = derive_seed(settings.seed, 0x5a17, job);
    const SamplerRun run = run_sampler(data.points, k, dp, g0.space, local, g0);
    std::vector<double> w1;
    std::vector<double> dsig;
    std::vector<double> l1;
    for (const auto& d : run.draws) {
      w1.push_back(d.w1_to_truth);
      dsig.push_back(d.dsig_to_truth);
      l1.push_back(d.l1_to_truth.value);
    }
    rows[job] = {n, rep, quantile(w1, 0.5), quantile(w1, 0.9), quantile(dsig, 0.5), quantile(l1, 0.5),
                 run.acceptance_warning};
  });
  return {rows};
}

RateFit rate_fit(const ContractionTable& table, const KernelFamily& k) {
  std::vector<std::uint64_t> ns;
  for (const auto& r : table.rows) ns.push_back(r.n);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  require(ns.size() >= 3, ErrorKind::precondition, "rate fit needs at least three sample sizes");

  const bool have_l1 =
      std::all_of(table.rows.begin(), table.rows.end(), [](const ContractionRow& r) { return r.median_l1 > 0.0; });
  RateFit fit;
  std::vector<double> log_n;
  std::vector<double> log_log_n;
  std::vector<double> yw;
  std::vector<double> ys;
  std::vector<double> yl;
  for (std::uint64_t n : ns) {
    require(n >= 3, ErrorKind::domain, "sample sizes must be at least 3");
    double sw = 0.0;
    double ss = 0.0;
    double sl = 0.0;
    double count = 0.0;
    for (const auto& r : table.rows) {
      if (r.n != n) continue;
      require(r.median_w1 > 0.0 && r.median_dsig > 0.0, ErrorKind::domain, "rate fit needs positive medians");
      sw += std::log(r.median_w1);
      ss += std::log(r.median_dsig);
      sl += have_l1 ? std::log(r.median_l1) : std::numeric_limits<double>::quiet_NaN();
      count += 1.0;
    }
    RateCurveRow row{n, sw / count, ss / count, sl / count, 0.0, 0.0, 0.0};
    try {
      const RateTriple t = theoretical_rate(k, n);
      row.theory_w1 = t.w1;
      row.theory_dsig = t.sigma;
      row.theory_l1 = t.l1;
      fit.has_theory = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::no_known_rate) throw;
    }
    fit.curve.push_back(row);
    log_n.push_back(std::log(static_cast<double>(n)));
    log_log_n.push_back(std::log(std::log(static_cast<double>(n))));
    yw.push_back(row.mean_log_w1);
    ys.push_back(row.mean_log_dsig);
    yl.push_back(row.mean_log_l1);
  }
  fit.slope_w1 = ls_slope(log_n, yw);
  fit.slope_dsig = ls_slope(log_n, ys);
  fit.slope_l1 = ls_slope(log_n, yl);
  auto corrected = [&](const std::vector<double>& y, const std::vector<double>& x, const std::vector<double>& factor,
                       double power) {
    std::vector<double> adj(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) adj[i] = y[i] - power * factor[i];
    return ls_slope(x, adj);
  };
  if (k.kind == KernelKind::laplace) {
    fit.corrected_slope_w1 = corrected(yw, log_n, log_log_n, 0.625);
    fit.corrected_slope_dsig = corrected(ys, log_n, log_log_n, 1.25);
    fit.corrected_slope_l1 = corrected(yl, log_n, log_log_n, 1.25);
  } else {
    std::vector<double> log3(log_log_n.size());
    for (std::size_t i = 0; i < log3.size(); ++i) log3[i] = std::log(log_log_n[i]);
    const double d = static_cast<double>(k.dim);
    fit.corrected_slope_w1 = k.kind == KernelKind::gaussian ? ls_slope(log3, yw) : ls_slope(log_log_n, yw);
    fit.corrected_slope_dsig = corrected(ys, log_log_n, log3, 1.0);
    fit.corrected_slope_l1 = corrected(yl, log_n, log_log_n, 0.5 * (d + 1.0));
  }
  return fit;
}

}  // namespace mixbound
