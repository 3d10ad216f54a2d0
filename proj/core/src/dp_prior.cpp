#include "mixbound/dp_prior.hpp"

#include <cmath>
#include <cstdio>

#include "mixbound/error.hpp"
#include "mixbound/format.hpp"

namespace mixbound {

namespace {

constexpr std::uint64_t kMaxSticks = 1'000'000;

double base_reach(const BaseMeasure& base) {
  return std::visit([](const auto& b) { return b.radius; }, base);
}

}  // namespace

void DpConfig::validate(const ParameterSpace& space) const {
  require(concentration > 0.0 && std::isfinite(concentration), ErrorKind::domain, "concentration must be positive");
  const double reach = base_reach(base);
  require(reach > 0.0, ErrorKind::domain, "base measure radius must be positive");
  require(reach <= space.radius * (1.0 + 1e-12), ErrorKind::support_violation,
          "base measure support exceeds the location ball");
  if (const auto* g = std::get_if<TruncatedGaussian>(&base)) {
    require(g->mean.size() == space.dim, ErrorKind::shape, "base mean has the wrong dimension");
    require(g->sd > 0.0, ErrorKind::domain, "base standard deviation must be positive");
    require(norm(g->mean) < g->radius, ErrorKind::domain, "base mean must lie inside the truncation ball");
  }
  if (const auto* f = std::get_if<FixedAtoms>(&truncation)) require(f->count >= 1, ErrorKind::domain, "need K >= 1");
  if (const auto* r = std::get_if<ResidualMass>(&truncation))
    require(r->eps > 0.0 && r->eps < 1.0, ErrorKind::domain, "residual eps must lie in (0, 1)");
}

Point sample_base(const BaseMeasure& base, std::size_t dim, CounterRng& rng) {
  if (const auto* u = std::get_if<UniformBall>(&base)) return rng.uniform_ball(dim, u->radius);
  const auto& g = std::get<TruncatedGaussian>(base);
  while (true) {
    Point x(dim);
    for (std::size_t i = 0; i < dim; ++i) x[i] = g.mean[i] + g.sd * rng.normal();
    if (norm(x) <= g.radius) return x;
  }
}

DiscreteMeasure stick_breaking_sample(const DpConfig& cfg, const ParameterSpace& space, std::uint64_t seed) {
  cfg.validate(space);
  CounterRng rng(seed, 0xd9);
  std::vector<Point> atoms;
  std::vector<double> weights;
  double remaining = 1.0;
  const auto* fixed = std::get_if<FixedAtoms>(&cfg.truncation);
  const auto* resid = std::get_if<ResidualMass>(&cfg.truncation);
  while (true) {
    const bool last = fixed && atoms.size() + 1 == fixed->count;
    const double b = last ? 1.0 : rng.beta(1.0, cfg.concentration);
    atoms.push_back(sample_base(cfg.base, space.dim, rng));
    weights.push_back(remaining * b);
    remaining *= 1.0 - b;
    if (last) break;
    if (resid && remaining < resid->eps) break;
    require(atoms.size() < kMaxSticks, ErrorKind::size, "stick-breaking did not reach the residual target");
  }
  weights.back() += remaining;
  return DiscreteMeasure(std::move(atoms), std::move(weights), space);
}

Dataset sample_dataset(const MixtureConfig& g0, const KernelFamily& k, std::size_t n, std::uint64_t seed) {
  require(n >= 1, ErrorKind::domain, "dataset size must be positive");
  require(k.dim == g0.dim(), ErrorKind::shape, "kernel dimension differs from the mixture's");
  k.check_scale(g0.scale);
  CounterRng rng(seed, 0xda7a);
  Dataset out;
  out.points.reserve(n);
  out.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = rng.categorical(g0.mixing.weights());
    out.labels.push_back(j);
    out.points.push_back(sample_kernel(k, g0.mixing.atom(j), g0.scale, rng));
  }
  return out;
}

std::uint64_t mixture_hash(const MixtureConfig& g) {
  const std::string text = to_json(g).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_dataset_csv(std::ostream& os, const Dataset& data, const MixtureConfig& g0, const KernelFamily& k,
                       std::uint64_t seed) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(mixture_hash(g0)));
  os << "# seed=" << seed << ",kernel=" << to_string(k.kind) << ",g0_hash=" << hash << '\n';
  for (std::size_t i = 0; i < g0.dim(); ++i) os << 'x' << i << ',';
  os << "label\n";
  for (std::size_t r = 0; r < data.points.size(); ++r) {
    for (double v : data.points[r]) os << format_double(v) << ',';
    os << data.labels[r] << '\n';
  }
}

}  // namespace mixbound
