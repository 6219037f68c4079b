#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "spinlab/spin_config.hpp"

namespace spinlab {

// Site indices in the C++ API are 0-based; the text file formats are 1-based.

/// Full n x n real coupling matrix X (SK draws g, g_t, or any perturbed X).
class DenseDisorder {
 public:
  /// Zero matrix.
  explicit DenseDisorder(std::size_t n);
  /// Row-major entries; all must be finite.
  DenseDisorder(std::size_t n, std::vector<double> entries);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double value);
  /// X + xi * J_ij, where J_ij has a single 1 at (i, j).
  DenseDisorder plus_unit(std::size_t i, std::size_t j, double xi) const;

  std::span<const double> entries() const noexcept { return entries_; }

  friend bool operator==(const DenseDisorder&, const DenseDisorder&) = default;

 private:
  std::size_t n_;
  std::vector<double> entries_;
};

/// One ordered entry (i, j) of a nonnegative integer matrix with its value.
struct Edge {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  std::uint64_t multiplicity = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Nonnegative integer matrix A stored as a multiset of ordered pairs.
/// A_ij is the multiplicity of (i, j); A is not required to be symmetric.
/// Edges are kept sorted by (i, j) with duplicates merged.
class SparseDisorder {
 public:
  explicit SparseDisorder(std::size_t n);
  /// Duplicate pairs are merged by adding multiplicities.
  SparseDisorder(std::size_t n, std::vector<Edge> edges);

  std::size_t size() const noexcept { return n_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  /// Sum of multiplicities.
  std::uint64_t total_edges() const noexcept { return total_; }
  std::uint64_t multiplicity(std::size_t i, std::size_t j) const;
  /// Sum of A_ii, the configuration-independent part of H.
  std::uint64_t self_loop_total() const noexcept;
  bool empty() const noexcept { return edges_.empty(); }

  friend bool operator==(const SparseDisorder&, const SparseDisorder&) = default;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::uint64_t total_ = 0;
};

/// Entrywise multiset sum; both operands must have the same n.
SparseDisorder operator+(const SparseDisorder& a, const SparseDisorder& b);

DenseDisorder to_dense(const SparseDisorder& a);

using Disorder = std::variant<DenseDisorder, SparseDisorder>;

std::size_t disorder_size(const Disorder& x);

/// H(sigma; X) = sum_{i,j} X_ij sigma(i) sigma(j) over the full double sum.
double hamiltonian(const SpinConfig& sigma, const DenseDisorder& x);
/// Integer-valued for sparse disorder (returned exactly in a double).
double hamiltonian(const SpinConfig& sigma, const SparseDisorder& a);
double hamiltonian(const SpinConfig& sigma, const Disorder& x);

/// H(sigma with `site` flipped) - H(sigma).
double hamiltonian_delta(const SpinConfig& sigma, std::size_t site, const DenseDisorder& x);
double hamiltonian_delta(const SpinConfig& sigma, std::size_t site, const SparseDisorder& a);
double hamiltonian_delta(const SpinConfig& sigma, std::size_t site, const Disorder& x);

/// Cut counts between the flipped set S and the two sides of a nearest
/// bisection tau, after orienting so that tau(i) = +1 on S.
///
/// `u` and `v` count multigraph edges, i.e. ordered entries in both directions:
///   u = sum_{i in S, j in T+ \ S} (A_ij + A_ji),  v = sum_{i in S, j in T-} (A_ij + A_ji),
/// so that H(tau) - H(sigma) = 2 (u - v) for any A. The one-directional sums
/// (A_ij with i in S only) are kept in `u_directed` / `v_directed`; for a
/// symmetric A they satisfy H(tau) - H(sigma) = 4 (u_directed - v_directed).
struct CrossTerms {
  std::uint64_t u = 0;
  std::uint64_t v = 0;
  std::uint64_t u_directed = 0;
  std::uint64_t v_directed = 0;
  std::size_t delta = 0;  ///< |S|, the number of flipped sites

  long long energy_change() const noexcept {
    return 2 * (static_cast<long long>(u) - static_cast<long long>(v));
  }
};

/// Requires tau to be a nearest bisection of sigma (checked); throws
/// std::invalid_argument otherwise.
CrossTerms cross_terms(const SpinConfig& sigma, const SpinConfig& tau, const SparseDisorder& a);

}  // namespace spinlab
