#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "spinlab/disorder.hpp"

namespace spinlab {

/// Generation metadata written into the sparse text header.
struct SparseHeader {
  double d = 0.0;
  std::uint64_t seed = 0;
};

/// Text format: a header line `n <n> d <d> seed <seed>` followed by one
/// `i j multiplicity` line per distinct ordered pair, 1-based, sorted by (i, j).
void write_sparse_text(std::ostream& out, const SparseDisorder& a, const SparseHeader& header);
SparseDisorder read_sparse_text(std::istream& in, SparseHeader* header = nullptr);

/// Binary format: 8-byte magic "SPLDNS01", n as little-endian uint64, then
/// n*n little-endian IEEE-754 float64 entries in row-major order.
void write_dense_binary(std::ostream& out, const DenseDisorder& x);
DenseDisorder read_dense_binary(std::istream& in);

/// Lossless text alternative: `dense n <n>` then n rows of n values printed
/// with 17 significant digits.
void write_dense_text(std::ostream& out, const DenseDisorder& x);
DenseDisorder read_dense_text(std::istream& in);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double value);

}  // namespace spinlab
