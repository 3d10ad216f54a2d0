#include "mixbound/random.hpp"

#include <boost/random/beta_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <cmath>

namespace mixbound {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(mix64(mix64(seed) ^ (a + kGolden)) ^ (b * kGolden + 0x632be59bd9b4e019ULL));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(derive_seed(seed, stream, 0x5eed)) {}

CounterRng::result_type CounterRng::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

CounterRng CounterRng::substream(std::uint64_t index) const noexcept {
  CounterRng r;
  r.key_ = derive_seed(key_, index, 0x5b5);
  return r;
}

double CounterRng::uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double CounterRng::uniform_open() noexcept {
  return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
}

double CounterRng::uniform(double a, double b) noexcept { return a + (b - a) * uniform(); }

double CounterRng::normal() { return boost::random::normal_distribution<double>(0.0, 1.0)(*this); }

double CounterRng::exponential() noexcept { return -std::log(uniform_open()); }

double CounterRng::beta(double a, double b) { return boost::random::beta_distribution<double>(a, b)(*this); }

double CounterRng::gamma(double shape) { return boost::random::gamma_distribution<double>(shape, 1.0)(*this); }

std::size_t CounterRng::categorical(std::span<const double> weights) noexcept {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = uniform() * total;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    u -= weights[j];
    if (u < 0.0) return j;
  }
  for (std::size_t j = weights.size(); j-- > 0;)
    if (weights[j] > 0.0) return j;
  return 0;
}

Vector CounterRng::normal_vector(std::size_t d) {
  Vector z(d);
  for (auto& v : z) v = normal();
  return z;
}

Vector CounterRng::uniform_ball(std::size_t d, double radius) {
  Vector z = normal_vector(d);
  const double n = norm(z);
  const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(d));
  for (auto& v : z) v *= (n > 0.0 ? r / n : 0.0);
  return z;
}

Matrix random_rotation(std::size_t d, CounterRng& rng) {
  std::vector<Vector> cols;
  while (cols.size() < d) {
    Vector v = rng.normal_vector(d);
    for (const auto& c : cols) {
      const double p = dot(v, c);
      for (std::size_t i = 0; i < d; ++i) v[i] -= p * c[i];
    }
    const double n = norm(v);
    if (n < 1e-8) continue;
    for (auto& x : v) x /= n;
    cols.push_back(std::move(v));
  }
  Matrix q(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) q(i, j) = cols[j][i];
  return q;
}

}  // namespace mixbound
