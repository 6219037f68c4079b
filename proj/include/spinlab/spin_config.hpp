#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace spinlab {

/// A configuration in {-1,+1}^n, bit-packed: bit 0 is +1, bit 1 is -1.
///
/// Padding bits beyond n in the last word are always zero, so word-wise
/// comparisons and popcounts need no masking.
class SpinConfig {
 public:
  /// All-plus configuration on n >= 1 sites.
  explicit SpinConfig(std::size_t n);

  /// Builds from explicit spins; every entry must be exactly -1 or +1.
  static SpinConfig from_spins(std::span<const int> spins);
  /// Builds from the low n bits of `bits` (n <= 64), bit i set meaning spin i is -1.
  static SpinConfig from_bits(std::size_t n, std::uint64_t bits);

  std::size_t size() const noexcept { return n_; }

  int spin(std::size_t i) const noexcept {
    return ((words_[i >> 6] >> (i & 63)) & 1u) ? -1 : 1;
  }
  int operator[](std::size_t i) const noexcept { return spin(i); }

  /// Checked access; throws std::out_of_range.
  int at(std::size_t i) const;
  void set(std::size_t i, int s);
  void flip(std::size_t i) noexcept { words_[i >> 6] ^= (std::uint64_t{1} << (i & 63)); }

  SpinConfig flipped(std::size_t i) const;
  SpinConfig negated() const;

  /// Number of -1 entries.
  std::size_t minus_count() const noexcept;
  /// Sum of spins, n - 2 * minus_count().
  long long sum() const noexcept;

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  /// The packed bits for n <= 64 (bit i set iff spin i is -1).
  std::uint64_t bits() const;

  std::vector<int> to_vector() const;

  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> words_;
};

/// Number of sites where the two configurations disagree.
std::size_t hamming_distance(const SpinConfig& a, const SpinConfig& b);

/// n * R(a, b) = n - 2 * hamming, an integer in {-n, -n+2, ..., n}.
long long overlap_numerator(const SpinConfig& a, const SpinConfig& b);

/// R(a, b) = (1/n) sum_i a(i) b(i).
double overlap(const SpinConfig& a, const SpinConfig& b);

/// m(sigma) = (1/n) sum_i sigma(i).
double magnetization(const SpinConfig& sigma);

/// Membership in A_n: |sum_i sigma(i)| <= 1.
bool is_bisection(const SpinConfig& sigma);

/// Minimum number of flips needed to reach A_n, floor(|sum| / 2).
std::size_t bisection_flip_count(const SpinConfig& sigma);

/// A bisection maximizing the overlap with sigma. Flips the lowest-indexed
/// majority-sign sites; returns sigma itself when it is already a bisection.
SpinConfig nearest_bisection(const SpinConfig& sigma);

}  // namespace spinlab
