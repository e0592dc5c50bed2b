#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace ctfactor {

/// Seeded random stream: xoshiro256** 1.0 state, initialized by running
/// splitmix64 over the seed. Normal deviates use the Marsaglia polar method.
/// Every transform is defined here rather than through <random>
/// distributions, whose output differs across standard libraries; identical
/// seed and call sequence give bit-identical results on every platform.
///
/// Stream version: "xoshiro256ss-polar/1".
class Rng {
 public:
  using result_type = std::uint64_t;
  static constexpr const char* kVersion = "xoshiro256ss-polar/1";

  explicit Rng(std::uint64_t seed);

  /// Seed for replicate `index` of a run with base seed `base`.
  static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) { return base + index; }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer in [0, n), unbiased (Lemire's multiply-and-reject).
  std::size_t index(std::size_t n);

  /// Fisher-Yates shuffle driven by index().
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  // UniformRandomBitGenerator interface.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ctfactor
