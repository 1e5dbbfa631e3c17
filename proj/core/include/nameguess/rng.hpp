#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace nameguess {

/// Seeded generator with distribution code that does not depend on the
/// standard library implementation, so fabricated corpora are byte-identical
/// across toolchains. The engine is mt19937_64, whose output sequence the
/// standard fixes; the std:: distributions are not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stable per-item seed from a run seed and a string key (FNV-1a of the
  /// key, mixed through splitmix64).
  static std::uint64_t derive_seed(std::uint64_t seed, std::string_view key);

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform();

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p);

  /// Index drawn with probability proportional to weights[i]. Weights must be
  /// non-negative with a positive sum.
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace nameguess
