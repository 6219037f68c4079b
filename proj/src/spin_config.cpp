#include "spinlab/spin_config.hpp"

#include <bit>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace spinlab {

namespace {

std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

void require_same_size(const SpinConfig& a, const SpinConfig& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("configuration length mismatch: " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
  }
}

}  // namespace

SpinConfig::SpinConfig(std::size_t n) : n_(n), words_(word_count(n), 0) {
  if (n == 0) throw std::invalid_argument("SpinConfig requires n >= 1");
}

SpinConfig SpinConfig::from_spins(std::span<const int> spins) {
  SpinConfig out(spins.size());
  for (std::size_t i = 0; i < spins.size(); ++i) {
    if (spins[i] != 1 && spins[i] != -1) {
      throw std::invalid_argument("spin at index " + std::to_string(i) + " is not +-1");
    }
    if (spins[i] == -1) out.flip(i);
  }
  return out;
}

SpinConfig SpinConfig::from_bits(std::size_t n, std::uint64_t bits) {
  if (n > 64) throw std::invalid_argument("from_bits supports n <= 64");
  SpinConfig out(n);
  out.words_[0] = n == 64 ? bits : bits & ((std::uint64_t{1} << n) - 1);
  return out;
}

int SpinConfig::at(std::size_t i) const {
  if (i >= n_) throw std::out_of_range("site index " + std::to_string(i) + " out of range");
  return spin(i);
}

void SpinConfig::set(std::size_t i, int s) {
  if (i >= n_) throw std::out_of_range("site index " + std::to_string(i) + " out of range");
  if (s != 1 && s != -1) throw std::invalid_argument("spin value must be +-1");
  if (spin(i) != s) flip(i);
}

SpinConfig SpinConfig::flipped(std::size_t i) const {
  if (i >= n_) throw std::out_of_range("site index " + std::to_string(i) + " out of range");
  SpinConfig out = *this;
  out.flip(i);
  return out;
}

SpinConfig SpinConfig::negated() const {
  SpinConfig out = *this;
  for (auto& w : out.words_) w = ~w;
  if (const std::size_t tail = n_ & 63; tail != 0) {
    out.words_.back() &= (std::uint64_t{1} << tail) - 1;
  }
  return out;
}

std::size_t SpinConfig::minus_count() const noexcept {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

long long SpinConfig::sum() const noexcept {
  return static_cast<long long>(n_) - 2 * static_cast<long long>(minus_count());
}

std::uint64_t SpinConfig::bits() const {
  if (n_ > 64) throw std::logic_error("bits() requires n <= 64");
  return words_[0];
}

std::vector<int> SpinConfig::to_vector() const {
  std::vector<int> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = spin(i);
  return out;
}

std::size_t hamming_distance(const SpinConfig& a, const SpinConfig& b) {
  require_same_size(a, b);
  auto wa = a.words();
  auto wb = b.words();
  std::size_t c = 0;
  for (std::size_t k = 0; k < wa.size(); ++k) c += static_cast<std::size_t>(std::popcount(wa[k] ^ wb[k]));
  return c;
}

long long overlap_numerator(const SpinConfig& a, const SpinConfig& b) {
  return static_cast<long long>(a.size()) - 2 * static_cast<long long>(hamming_distance(a, b));
}

double overlap(const SpinConfig& a, const SpinConfig& b) {
  return static_cast<double>(overlap_numerator(a, b)) / static_cast<double>(a.size());
}

double magnetization(const SpinConfig& sigma) {
  return static_cast<double>(sigma.sum()) / static_cast<double>(sigma.size());
}

bool is_bisection(const SpinConfig& sigma) { return std::llabs(sigma.sum()) <= 1; }

std::size_t bisection_flip_count(const SpinConfig& sigma) {
  return static_cast<std::size_t>(std::llabs(sigma.sum()) / 2);
}

SpinConfig nearest_bisection(const SpinConfig& sigma) {
  const long long s = sigma.sum();
  std::size_t remaining = bisection_flip_count(sigma);
  SpinConfig tau = sigma;
  const int majority = s > 0 ? 1 : -1;
  for (std::size_t i = 0; i < sigma.size() && remaining > 0; ++i) {
    if (sigma.spin(i) == majority) {
      tau.flip(i);
      --remaining;
    }
  }
  return tau;
}

}  // namespace spinlab
