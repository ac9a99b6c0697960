#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace fislab {

// SplitMix64 finalizer, used to derive independent seed streams from one
// global seed. Every source of randomness in the library flows through
// derive_seed(component, index) — no ambient entropy anywhere.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class SeedStream : std::uint64_t {
  threshold_calibration = 1,
  synthetic_draw = 2,
  subsample = 3,
  bootstrap_resample = 4,
  forest_model = 5,
  tree = 6,
  data_cut_step = 7,
  feature_cut_step = 8,
  correlation_sweep = 9,
  sufficiency_point = 10,
  holdout_split = 11,
  population = 12,
  monte_carlo = 13,
};

inline std::uint64_t derive_seed(std::uint64_t base, SeedStream stream,
                                 std::uint64_t index = 0) {
  const std::uint64_t h = mix64(base ^ mix64(static_cast<std::uint64_t>(stream)));
  return mix64(h ^ (index * 0xd1342543de82ef95ULL + 1));
}

/// mt19937_64 with portable helpers. The engine itself is bit-exact per the
/// standard; the helpers avoid std::uniform_*_distribution, whose output is
/// implementation-defined, so streams are reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t rem = std::numeric_limits<std::uint64_t>::max() % n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fislab
