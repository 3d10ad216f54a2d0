#pragma once

#include <cstdint>
#include <limits>
#include <span>

#include "mixbound/linalg.hpp"

namespace mixbound {

/// Counter-based 64-bit generator. Output i of stream (seed, stream) is a
/// SplitMix64-style finalizer of key + (i+1)*golden, so any position can be
/// reached directly and streams never share state.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng() : CounterRng(0, 0) {}
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Independent generator keyed on (this key, index); does not advance this one.
  CounterRng substream(std::uint64_t index) const noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  // Convenience draws; each documents how many raw outputs it consumes.
  double uniform() noexcept;                   // 1 draw, in [0,1)
  double uniform_open() noexcept;              // 1 draw, in (0,1)
  double uniform(double a, double b) noexcept; // 1 draw
  double normal();                             // Boost ziggurat, variable
  double exponential() noexcept;               // 1 draw
  double beta(double a, double b);             // Boost gamma-ratio, variable
  double gamma(double shape);                  // Boost, variable
  std::size_t categorical(std::span<const double> weights) noexcept;  // 1 draw

  Vector normal_vector(std::size_t d);
  /// Uniform point in the closed ball of the given radius (d normals + 1 uniform).
  Vector uniform_ball(std::size_t d, double radius);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept;

/// Uniformly random rotation (Haar, via Gram-Schmidt of a normal matrix).
Matrix random_rotation(std::size_t d, CounterRng& rng);

}  // namespace mixbound
