#include "drknn/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace drknn {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_stream(std::uint64_t root_seed, std::uint64_t ordinal) {
  return mix64(root_seed ^ mix64(ordinal));
}

int Rng::uniform_index(int bound) {
  if (bound <= 0) throw std::invalid_argument("uniform_index bound must be positive");
  const std::uint64_t b = static_cast<std::uint64_t>(bound);
  const std::uint64_t threshold = (0 - b) % b;  // 2^64 mod b
  std::uint64_t r = next_u64();
  while (r < threshold) r = next_u64();
  return static_cast<int>(r % b);
}

double Rng::uniform_unit() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::normal(double mean, double stddev) {
  if (have_spare_) {
    have_spare_ = false;
    return mean + stddev * spare_;
  }
  const double u1 = uniform_unit();
  const double u2 = uniform_unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return mean + stddev * radius * std::cos(angle);
}

}  // namespace drknn
