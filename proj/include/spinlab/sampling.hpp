#pragma once

#include <cstddef>
#include <cstdint>

#include "spinlab/disorder.hpp"

namespace spinlab {

/// n x n matrix of iid N(0, 1/(2n)) entries.
DenseDisorder sample_sk(std::size_t n, std::uint64_t seed);

/// Every entry A_ij (i, j in [n], self-loops included) iid Poisson(d/(2n)).
/// Drawn as a Poisson(dn/2) number of ordered pairs with uniform endpoints,
/// which has exactly this law.
SparseDisorder sample_sparse(std::size_t n, double d, std::uint64_t seed);

/// sqrt(1-t) g + sqrt(t) g' with g' = sample_sk(n, seed). Returns g at t = 0.
DenseDisorder couple_sk(const DenseDisorder& g, double t, std::uint64_t seed);

/// A = shared + first_private and A_t = shared + second_private, the three
/// parts independent with per-entry rates (1-t)d/(2n), td/(2n), td/(2n).
struct SparsePair {
  SparseDisorder shared;
  SparseDisorder first_private;
  SparseDisorder second_private;

  SparseDisorder first() const { return shared + first_private; }
  SparseDisorder second() const { return shared + second_private; }
};

/// Streams derive_seed(seed, 0..2) drive the shared and private parts.
SparsePair couple_sparse(std::size_t n, double d, double t, std::uint64_t seed);

/// Poissonized multigraph with rate `rate` per ordered entry.
SparseDisorder sample_sparse_rate(std::size_t n, double rate, std::uint64_t seed);

}  // namespace spinlab
