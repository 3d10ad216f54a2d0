#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "mixbound/kernels.hpp"
#include "mixbound/measures.hpp"

namespace mixbound {

struct UniformBall {
  double radius;  // must not exceed the space radius
};

struct TruncatedGaussian {
  Point mean;
  double sd;
  double radius;  // truncation radius
};

using BaseMeasure = std::variant<UniformBall, TruncatedGaussian>;

struct FixedAtoms {
  std::size_t count;
};

struct ResidualMass {
  double eps;
};

using Truncation = std::variant<FixedAtoms, ResidualMass>;

struct DpConfig {
  double concentration = 1.0;
  BaseMeasure base = UniformBall{1.0};
  Truncation truncation = ResidualMass{1e-6};

  void validate(const ParameterSpace& space) const;
};

Point sample_base(const BaseMeasure& base, std::size_t dim, CounterRng& rng);

/// Stick-breaking draw. Draw order per stick: Beta(1, a) stick, then the atom.
/// The mass left after the last stick is added to the last atom.
DiscreteMeasure stick_breaking_sample(const DpConfig& cfg, const ParameterSpace& space, std::uint64_t seed);

struct Dataset {
  std::vector<Point> points;
  std::vector<std::size_t> labels;
};

/// i.i.d. draws from p_G0. Per point: component index, then the kernel draw.
Dataset sample_dataset(const MixtureConfig& g0, const KernelFamily& k, std::size_t n, std::uint64_t seed);

/// FNV-1a over the canonical JSON text of the mixture.
std::uint64_t mixture_hash(const MixtureConfig& g);

/// CSV: a '# seed=..,kernel=..,g0_hash=..' line, a column header, one row per point.
void write_dataset_csv(std::ostream& os, const Dataset& data, const MixtureConfig& g0, const KernelFamily& k,
                       std::uint64_t seed);

}  // namespace mixbound
