#include "spinlab/sampling.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spinlab/rng.hpp"

namespace spinlab {

namespace {

void require_t(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("coupling parameter t must be in [0, 1]");
}

}  // namespace

DenseDisorder sample_sk(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_sk: n must be >= 1");
  Rng rng(seed);
  const double sd = std::sqrt(1.0 / (2.0 * static_cast<double>(n)));
  std::vector<double> entries(n * n);
  for (auto& e : entries) e = sd * rng.normal();
  return DenseDisorder(n, std::move(entries));
}

SparseDisorder sample_sparse_rate(std::size_t n, double rate, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_sparse: n must be >= 1");
  if (!(rate >= 0.0)) throw std::invalid_argument("sample_sparse: rate must be >= 0");
  Rng rng(seed);
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  const std::uint64_t m = rng.poisson(rate * nn);
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t k = 0; k < m; ++k) {
    const auto i = static_cast<std::uint32_t>(rng.uniform_index(n));
    const auto j = static_cast<std::uint32_t>(rng.uniform_index(n));
    edges.push_back({i, j, 1});
  }
  return SparseDisorder(n, std::move(edges));
}

SparseDisorder sample_sparse(std::size_t n, double d, std::uint64_t seed) {
  if (!(d > 0.0)) throw std::invalid_argument("sample_sparse: d must be > 0");
  return sample_sparse_rate(n, d / (2.0 * static_cast<double>(n)), seed);
}

DenseDisorder couple_sk(const DenseDisorder& g, double t, std::uint64_t seed) {
  require_t(t);
  if (t == 0.0) return g;
  const std::size_t n = g.size();
  const DenseDisorder fresh = sample_sk(n, seed);
  const double a = std::sqrt(1.0 - t);
  const double b = std::sqrt(t);
  std::vector<double> entries(n * n);
  for (std::size_t k = 0; k < n * n; ++k) entries[k] = a * g.entries()[k] + b * fresh.entries()[k];
  return DenseDisorder(n, std::move(entries));
}

SparsePair couple_sparse(std::size_t n, double d, double t, std::uint64_t seed) {
  require_t(t);
  if (!(d > 0.0)) throw std::invalid_argument("couple_sparse: d must be > 0");
  const double rate = d / (2.0 * static_cast<double>(n));
  return {sample_sparse_rate(n, (1.0 - t) * rate, derive_seed(seed, 0)),
          sample_sparse_rate(n, t * rate, derive_seed(seed, 1)),
          sample_sparse_rate(n, t * rate, derive_seed(seed, 2))};
}

}  // namespace spinlab
