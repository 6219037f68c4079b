#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spinlab/exact.hpp"
#include "spinlab/parallel.hpp"

namespace spinlab {

namespace {

// Sign of k - a * n computed without rounding a * n.
int compare_scaled(long long k, double a, std::size_t n) {
  const auto nn = static_cast<double>(n);
  const double p = a * nn;
  const double err = std::fma(a, nn, -p);  // a * n == p + err exactly
  const double diff = static_cast<double>(k) - p;
  if (diff > err) return 1;
  if (diff < err) return -1;
  return 0;
}

std::vector<std::uint64_t> support_of(const GibbsTable& t) {
  std::vector<std::uint64_t> s;
  for (std::size_t k = 0; k < t.weights.size(); ++k) {
    if (t.weights[k] != 0.0) s.push_back(k);
  }
  return s;
}

void require_same_n(const GibbsTable& a, const GibbsTable& b) {
  if (a.n != b.n) throw std::invalid_argument("replica measures must have the same n");
}

}  // namespace

OverlapSet OverlapSet::i_epsilon(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  return {{{-1.0, -eps}, {eps, 1.0}}};
}

void OverlapSet::validate() const {
  if (intervals.empty()) throw std::invalid_argument("OverlapSet must contain an interval");
  for (const auto& [a, b] : intervals) {
    if (!(a >= -1.0 && b <= 1.0 && a <= b)) {
      throw std::invalid_argument("OverlapSet intervals must satisfy -1 <= a <= b <= 1");
    }
  }
}

bool OverlapSet::contains(long long k, std::size_t n) const {
  for (const auto& [a, b] : intervals) {
    if (compare_scaled(k, a, n) >= 0 && compare_scaled(k, b, n) <= 0) return true;
  }
  return false;
}

std::vector<double> hamming_histogram(const GibbsTable& first, const GibbsTable& second) {
  require_same_n(first, second);
  const std::size_t n = first.n;
  const auto sa = support_of(first);
  const auto sb = support_of(second);
  std::vector<double> wb(sb.size());
  for (std::size_t k = 0; k < sb.size(); ++k) wb[k] = second.weights[sb[k]];

  constexpr std::size_t kRows = 64;
  const std::size_t chunks = (sa.size() + kRows - 1) / kRows;
  std::vector<std::vector<double>> partial(chunks, std::vector<double>(n + 1, 0.0));
  parallel_for(chunks, [&](std::size_t c) {
    auto& hist = partial[c];
    std::vector<double> row(n + 1);
    const std::size_t end = std::min(sa.size(), (c + 1) * kRows);
    for (std::size_t r = c * kRows; r < end; ++r) {
      const std::uint64_t a = sa[r];
      std::fill(row.begin(), row.end(), 0.0);
      for (std::size_t q = 0; q < sb.size(); ++q) row[std::popcount(a ^ sb[q])] += wb[q];
      const double wa = first.weights[a];
      for (std::size_t k = 0; k <= n; ++k) hist[k] += wa * row[k];
    }
  });
  std::vector<double> total(n + 1, 0.0);
  for (const auto& h : partial) {
    for (std::size_t k = 0; k <= n; ++k) total[k] += h[k];
  }
  return total;
}

double two_replica_expectation(const GibbsTable& table, PairObservable obs) {
  const std::size_t n = table.n;
  const auto nn = static_cast<double>(n);
  if (obs == PairObservable::overlap_sq) {
    const auto m = pair_correlations(table);
    double s = 0.0;
    for (double v : m) s += v * v;
    return s / (nn * nn);
  }
  if (n > kCoupledCap) {
    throw std::invalid_argument("two_replica_expectation: |R| needs n <= " +
                                std::to_string(kCoupledCap));
  }
  const auto hist = hamming_histogram(table, table);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    num += hist[k] * std::abs(nn - 2.0 * static_cast<double>(k)) / nn;
    den += hist[k];
  }
  return num / den;
}

double two_replica_expectation(const GibbsSpec& spec, PairObservable obs, std::size_t cap) {
  return two_replica_expectation(gibbs_table(spec, cap), obs);
}

double coupled_overlap_sq(const GibbsTable& first, const GibbsTable& second) {
  require_same_n(first, second);
  const auto nn = static_cast<double>(first.n);
  const auto m1 = pair_correlations(first);
  const auto m2 = pair_correlations(second);
  double s = 0.0;
  for (std::size_t k = 0; k < m1.size(); ++k) s += m1[k] * m2[k];
  return s / (nn * nn);
}

CoupledMass coupled_mass(const CoupledSpec& cspec, std::size_t cap) {
  cspec.restriction.validate();
  if (cspec.first.index() != cspec.second.index()) {
    throw std::invalid_argument("coupled disorders must be of the same kind");
  }
  const std::size_t n = disorder_size(cspec.first);
  if (disorder_size(cspec.second) != n) throw std::invalid_argument("coupled disorders differ in n");
  if (n > cap) {
    throw std::invalid_argument("coupled enumeration: n=" + std::to_string(n) +
                                " exceeds the cap " + std::to_string(cap));
  }
  const GibbsTable a = gibbs_table({cspec.first, cspec.beta, cspec.variant});
  const GibbsTable b = gibbs_table({cspec.second, cspec.beta, cspec.variant});
  const auto hist = hamming_histogram(a, b);
  double restricted = 0.0, full = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    full += hist[k];
    const long long num = static_cast<long long>(n) - 2 * static_cast<long long>(k);
    if (cspec.restriction.contains(num, n)) restricted += hist[k];
  }
  CoupledMass out;
  const double shift = a.shift + b.shift;
  out.log_z_full = shift + std::log(full);
  out.log_z_restricted =
      restricted > 0.0 ? shift + std::log(restricted) : -std::numeric_limits<double>::infinity();
  out.mass = restricted / full;
  return out;
}

double coupled_log_partition(const CoupledSpec& cspec, std::size_t cap) {
  return coupled_mass(cspec, cap).log_z_restricted;
}

double coupled_overlap_mass(const CoupledSpec& cspec, std::size_t cap) {
  return coupled_mass(cspec, cap).mass;
}

}  // namespace spinlab
