#include "spinlab/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spinlab/parallel.hpp"

namespace spinlab {

namespace {

constexpr std::size_t kBlockBits = 14;
constexpr std::size_t kSumChunk = std::size_t{1} << 12;

void require_cap(std::size_t n, std::size_t cap, const char* what) {
  if (n > cap || n > 62) {
    throw std::invalid_argument(std::string(what) + ": n=" + std::to_string(n) +
                                " exceeds the enumeration cap " + std::to_string(cap));
  }
}

// Sum of v[k] over [0, size) in fixed chunks combined in index order.
template <class F>
double chunked_sum(std::size_t size, F&& term) {
  const std::size_t chunks = (size + kSumChunk - 1) / kSumChunk;
  std::vector<double> partial(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    double s = 0.0;
    const std::size_t end = std::min(size, (c + 1) * kSumChunk);
    for (std::size_t k = c * kSumChunk; k < end; ++k) s += term(k);
    partial[c] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

std::string to_string(Variant v) { return v == Variant::free ? "free" : "bisection"; }

Variant parse_variant(const std::string& s) {
  if (s == "free") return Variant::free;
  if (s == "bisection" || s == "bis") return Variant::bisection;
  throw std::invalid_argument("unknown variant '" + s + "' (expected free or bisection)");
}

std::vector<double> enumerate_energies(const CouplingGraph& graph, std::size_t cap) {
  const std::size_t n = graph.size();
  require_cap(n, cap, "enumerate_energies");
  const std::size_t total = std::size_t{1} << n;
  const std::size_t block_bits = std::min(n, kBlockBits);
  const std::size_t block = std::size_t{1} << block_bits;
  std::vector<double> energies(total);

  parallel_for(total / block, [&](std::size_t b) {
    const std::uint64_t k0 = static_cast<std::uint64_t>(b) * block;
    std::uint64_t g = k0 ^ (k0 >> 1);
    std::vector<double> spin(n), field(n);
    for (std::size_t i = 0; i < n; ++i) spin[i] = ((g >> i) & 1u) ? -1.0 : 1.0;
    double pair = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double h = 0.0;
      for (const auto& nb : graph.neighbors(i)) h += nb.weight * spin[nb.site];
      field[i] = h;
      pair += spin[i] * h;
    }
    double e = graph.diagonal() + 0.5 * pair;
    energies[g] = e;
    for (std::uint64_t k = k0 + 1; k < k0 + block; ++k) {
      const auto i = static_cast<std::size_t>(std::countr_zero(k));
      e -= 2.0 * spin[i] * field[i];
      spin[i] = -spin[i];
      const double s2 = 2.0 * spin[i];
      for (const auto& nb : graph.neighbors(i)) field[nb.site] += s2 * nb.weight;
      g ^= std::uint64_t{1} << i;
      energies[g] = e;
    }
  });
  return energies;
}

std::vector<double> GibbsTable::probabilities() const {
  std::vector<double> p(weights.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = weights[k] / weight_sum;
  return p;
}

GibbsTable gibbs_table(const GibbsSpec& spec, std::size_t cap) {
  if (!std::isfinite(spec.beta)) throw std::invalid_argument("gibbs_table: beta must be finite");
  GibbsTable t;
  t.n = disorder_size(spec.disorder);
  t.beta = spec.beta;
  t.variant = spec.variant;
  t.energies = enumerate_energies(CouplingGraph(spec.disorder), cap);
  const std::size_t total = t.energies.size();

  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < total; ++k) {
    if (in_support(k, t.n, t.variant)) shift = std::max(shift, -spec.beta * t.energies[k]);
  }
  t.shift = shift;
  t.weights.assign(total, 0.0);
  parallel_for((total + kSumChunk - 1) / kSumChunk, [&](std::size_t c) {
    const std::size_t end = std::min(total, (c + 1) * kSumChunk);
    for (std::size_t k = c * kSumChunk; k < end; ++k) {
      if (in_support(k, t.n, t.variant)) t.weights[k] = std::exp(-spec.beta * t.energies[k] - shift);
    }
  });
  t.weight_sum = chunked_sum(total, [&](std::size_t k) { return t.weights[k]; });
  t.log_z = shift + std::log(t.weight_sum);
  return t;
}

double log_partition(const GibbsSpec& spec, std::size_t cap) { return gibbs_table(spec, cap).log_z; }

double free_energy(const GibbsSpec& spec, std::size_t cap) {
  return log_partition(spec, cap) / static_cast<double>(disorder_size(spec.disorder));
}

double log_bisection_count(std::size_t n) {
  const auto half = static_cast<double>(n / 2);
  const auto nn = static_cast<double>(n);
  const double log_binom = std::lgamma(nn + 1.0) - std::lgamma(half + 1.0) - std::lgamma(nn - half + 1.0);
  return n % 2 == 0 ? log_binom : std::log(2.0) + log_binom;
}

double gibbs_expectation(const GibbsTable& table, Observable obs) {
  const std::size_t n = table.n;
  const auto nn = static_cast<double>(n);
  const double num = chunked_sum(table.weights.size(), [&](std::size_t k) {
    const double w = table.weights[k];
    if (w == 0.0) return 0.0;
    const double m = (nn - 2.0 * std::popcount(static_cast<std::uint64_t>(k))) / nn;
    switch (obs) {
      case Observable::energy: return w * table.energies[k];
      case Observable::magnetization_sq: return w * m * m;
      case Observable::abs_magnetization: return w * std::abs(m);
    }
    return 0.0;
  });
  return num / table.weight_sum;
}

double gibbs_expectation(const GibbsSpec& spec, Observable obs, std::size_t cap) {
  return gibbs_expectation(gibbs_table(spec, cap), obs);
}

std::vector<double> pair_correlations(const GibbsTable& table) {
  const std::size_t n = table.n;
  std::vector<double> f = table.probabilities();
  const std::size_t total = f.size();
  for (std::size_t len = 1; len < total; len <<= 1) {
    for (std::size_t base = 0; base < total; base += 2 * len) {
      for (std::size_t k = base; k < base + len; ++k) {
        const double a = f[k];
        const double b = f[k + len];
        f[k] = a + b;
        f[k + len] = a - b;
      }
    }
  }
  std::vector<double> m(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) m[i * n + j] = f[(std::size_t{1} << i) | (std::size_t{1} << j)];
    }
  }
  return m;
}

}  // namespace spinlab
