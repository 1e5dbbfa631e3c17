#include <doctest.h>

#include <array>
#include <set>
#include <vector>

#include "nameguess/rng.hpp"

using nameguess::Rng;

TEST_CASE("same seed gives the same stream") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs |= x != c.next();
  }
  CHECK(differs);
}

TEST_CASE("derive_seed depends on both seed and key") {
  const auto s = Rng::derive_seed(7, "table_a");
  CHECK(s == Rng::derive_seed(7, "table_a"));
  CHECK(s != Rng::derive_seed(7, "table_b"));
  CHECK(s != Rng::derive_seed(8, "table_a"));
  CHECK(Rng::derive_seed(0, "") != Rng::derive_seed(1, ""));
}

TEST_CASE("uniform stays in [0,1)") {
  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("below and between cover their ranges") {
  Rng r(5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.below(7);
    REQUIRE(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  std::set<std::int64_t> between;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.between(1, 5);
    REQUIRE(v >= 1);
    REQUIRE(v <= 5);
    between.insert(v);
  }
  CHECK(between.size() == 5);
  CHECK(r.below(1) == 0);
}

TEST_CASE("certain bernoulli outcomes consume no randomness") {
  Rng a(9), b(9);
  CHECK_FALSE(a.bernoulli(0.0));
  CHECK(a.bernoulli(1.0));
  CHECK(a.next() == b.next());
}

TEST_CASE("categorical follows its weights") {
  Rng r(11);
  const std::array<double, 3> w{0.2, 0.5, 0.3};
  std::array<int, 3> counts{};
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++counts[r.categorical(w)];
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(static_cast<double>(counts[i]) / n == doctest::Approx(w[i]).epsilon(0.02));
  }
  const std::array<double, 3> zero_first{0.0, 1.0, 0.0};
  for (int i = 0; i < 100; ++i) CHECK(r.categorical(zero_first) == 1);
}
