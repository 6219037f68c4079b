#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spinlab/disorder.hpp"
#include "spinlab/spin_config.hpp"

namespace spinlab {

/// Symmetrized neighbor lists of a disorder, the form every inner loop uses.
///
/// H(sigma) = diagonal + sum_{i<j} w_ij sigma(i) sigma(j) with w_ij = X_ij + X_ji.
/// The off-diagonal local field is h_i = sum_{j != i} w_ij sigma(j), so flipping
/// site i changes H by -2 sigma(i) h_i. For sparse disorder every weight is an
/// integer and all sums stay exact in double precision.
class CouplingGraph {
 public:
  struct Neighbor {
    std::uint32_t site;
    double weight;
  };

  explicit CouplingGraph(const DenseDisorder& x);
  explicit CouplingGraph(const SparseDisorder& a);
  explicit CouplingGraph(const Disorder& x);

  std::size_t size() const noexcept { return n_; }
  /// sum_i X_ii, contributed to H by every configuration.
  double diagonal() const noexcept { return diagonal_; }
  bool integral() const noexcept { return integral_; }

  std::span<const Neighbor> neighbors(std::size_t i) const noexcept {
    return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
  }
  /// w_ij for i != j, zero when absent.
  double weight(std::size_t i, std::size_t j) const;

  double local_field(const SpinConfig& sigma, std::size_t i) const;
  std::vector<double> local_fields(const SpinConfig& sigma) const;
  /// H from scratch via fields: diagonal + (1/2) sum_i sigma(i) h_i.
  double energy(const SpinConfig& sigma) const;
  /// Same as energy() for a configuration packed in the low n bits (n <= 64).
  double energy_bits(std::uint64_t bits) const;

 private:
  void build(std::size_t n, std::vector<std::vector<Neighbor>> rows);

  std::size_t n_ = 0;
  double diagonal_ = 0.0;
  bool integral_ = false;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adj_;
};

}  // namespace spinlab
