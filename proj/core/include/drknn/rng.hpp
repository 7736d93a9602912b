#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace drknn {

/// SplitMix64 finalizer; bijective, well mixed.
std::uint64_t mix64(std::uint64_t z);

/// Stable per-ordinal substream seed. Distinct ordinals give independent
/// streams for the same root, and the derivation never changes between
/// runs, so sampled episodes are reproducible.
std::uint64_t derive_stream(std::uint64_t root_seed, std::uint64_t ordinal);

/// Deterministic random source. The engine (std::mt19937_64) has a
/// standardized state transition and every derived draw below avoids
/// implementation-defined library paths, so identical seeds give identical
/// streams on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on {0, ..., bound - 1} by rejection sampling (no modulo bias).
  int uniform_index(int bound);

  /// Uniform on (0, 1]; the shifted 53-bit draw can never be exactly 0.
  double uniform_unit();

  /// Gaussian via the Box-Muller transform; pairs are cached.
  double normal(double mean = 0.0, double stddev = 1.0);

  /// Fisher-Yates shuffle (std::shuffle's draw pattern is unspecified).
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(uniform_index(static_cast<int>(i)));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace drknn
