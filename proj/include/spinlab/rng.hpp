#pragma once

#include <cstdint>
#include <random>

namespace spinlab {

/// Seed for stream `index` under `master` (splitmix64 finalizer):
///   z = master ^ (0x9E3779B97F4A7C15 * (index + 1))
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
/// All arithmetic is modulo 2^64.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  std::uint64_t z = master ^ (0x9E3779B97F4A7C15ULL * (index + 1));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// mt19937_64 stream with distribution code fixed in this library, so draws
/// are identical across standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// (x >> 11) * 2^-53, in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, bound) by rejection; bound >= 1.
  std::uint64_t uniform_index(std::uint64_t bound);
  /// Standard normal, Marsaglia polar method (second variate cached).
  double normal();
  /// Exact Poisson(lambda): inversion for lambda < 10, PTRS rejection otherwise.
  std::uint64_t poisson(double lambda);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace spinlab
