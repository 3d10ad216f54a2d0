#include <cmath>
#include <set>

#include "doctest.h"
#include "mixbound/random.hpp"

using namespace mixbound;

TEST_CASE("counter generator is positional and stream separated") {
  CounterRng a(5, 1), b(5, 1), c(5, 2), d(6, 1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
    seen.insert(x);
  }
  CHECK(seen.size() == 1000);
  CHECK(a.counter() == 1000);
  const auto s1 = a.substream(3), s2 = a.substream(3);
  CHECK(s1.key() == s2.key());
  CHECK(a.substream(4).key() != s1.key());
  CHECK(a.counter() == 1000);
}

TEST_CASE("uniform draws") {
  CounterRng r(1);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  std::vector<int> bins(10, 0);
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    sum += u;
    sq += u * u;
    ++bins[static_cast<int>(u * 10)];
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sq / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
  double chi2 = 0.0;
  for (int b : bins) chi2 += (b - n / 10.0) * (b - n / 10.0) / (n / 10.0);
  CHECK(chi2 < 30.0);
  for (int i = 0; i < 1000; ++i) CHECK(r.uniform_open() > 0.0);
  const auto before = r.counter();
  (void)r.uniform(2.0, 3.0);
  (void)r.exponential();
  (void)r.categorical(std::vector<double>{0.2, 0.8});
  CHECK(r.counter() == before + 3);
}

TEST_CASE("continuous distributions") {
  CounterRng r(2);
  const int n = 100000;
  double m = 0.0, v = 0.0, e = 0.0, b = 0.0, g = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    m += z;
    v += z * z;
    e += r.exponential();
    b += r.beta(2.0, 3.0);
    g += r.gamma(2.5);
  }
  CHECK(std::abs(m / n) < 0.02);
  CHECK(v / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(e / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(b / n == doctest::Approx(0.4).epsilon(0.01));
  CHECK(g / n == doctest::Approx(2.5).epsilon(0.02));
}

TEST_CASE("categorical and ball draws") {
  CounterRng r(3);
  const std::vector<double> w{1.0, 0.0, 3.0};
  std::vector<int> c(3, 0);
  for (int i = 0; i < 40000; ++i) ++c[r.categorical(w)];
  CHECK(c[1] == 0);
  CHECK(c[0] / 40000.0 == doctest::Approx(0.25).epsilon(0.04));
  double inner = 0.0;
  for (int i = 0; i < 40000; ++i) {
    const Vector p = r.uniform_ball(3, 2.0);
    CHECK(norm(p) <= 2.0);
    if (norm(p) <= 1.0) inner += 1.0;
  }
  CHECK(inner / 40000 == doctest::Approx(0.125).epsilon(0.05));
}

TEST_CASE("random rotations are orthogonal") {
  CounterRng r(4);
  for (std::size_t d : {1u, 2u, 3u, 5u}) {
    const Matrix q = random_rotation(d, r);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += q(k, i) * q(k, j);
        CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-12));
      }
  }
}

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
  CHECK(mix64(0) != mix64(1));
}
