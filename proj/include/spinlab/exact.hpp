#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spinlab/coupling_graph.hpp"
#include "spinlab/disorder.hpp"

namespace spinlab {

/// Default size limits of the exact oracles.
constexpr std::size_t kEnumerationCap = 24;  ///< single 2^n pass
constexpr std::size_t kCoupledCap = 13;      ///< 4^n double enumeration
constexpr std::size_t kGradientCap = 10;     ///< per-entry gradient vectors
constexpr std::size_t kTransportCap = 8;     ///< 2^n x 2^n transport problem

enum class Variant { free, bisection };

std::string to_string(Variant v);
/// Accepts "free" and "bisection"; throws std::invalid_argument otherwise.
Variant parse_variant(const std::string& s);

/// Gibbs measure mu (free) or mu^bis (bisection) at inverse temperature beta.
/// beta is used as given; sparse callers pass beta / sqrt(d).
struct GibbsSpec {
  Disorder disorder;
  double beta = 0.0;
  Variant variant = Variant::free;
};

/// Configurations are indexed by their bit pattern: bit i set means spin i is -1.
constexpr bool in_support(std::uint64_t bits, std::size_t n, Variant variant) noexcept {
  if (variant == Variant::free) return true;
  const long long minus = __builtin_popcountll(bits);
  const long long sum = static_cast<long long>(n) - 2 * minus;
  return sum >= -1 && sum <= 1;
}

/// Energies of all 2^n configurations, indexed by bit pattern. Computed in
/// Gray-code order within fixed blocks whose start is evaluated from scratch,
/// so the result does not depend on the thread count.
std::vector<double> enumerate_energies(const CouplingGraph& graph, std::size_t cap = kEnumerationCap);

/// Full enumeration of one Gibbs measure.
struct GibbsTable {
  std::size_t n = 0;
  double beta = 0.0;
  Variant variant = Variant::free;
  std::vector<double> energies;  ///< by bit pattern, all 2^n entries
  /// exp(-beta H - shift) on the support, 0 elsewhere; the largest is 1.
  std::vector<double> weights;
  double shift = 0.0;
  double weight_sum = 0.0;
  double log_z = 0.0;

  double probability(std::uint64_t bits) const { return weights[bits] / weight_sum; }
  std::vector<double> probabilities() const;
};

GibbsTable gibbs_table(const GibbsSpec& spec, std::size_t cap = kEnumerationCap);

/// log Z by streaming log-sum-exp over the support.
double log_partition(const GibbsSpec& spec, std::size_t cap = kEnumerationCap);

enum class Observable { energy, magnetization_sq, abs_magnetization };
enum class PairObservable { overlap_sq, abs_overlap };

double gibbs_expectation(const GibbsTable& table, Observable obs);
double gibbs_expectation(const GibbsSpec& spec, Observable obs, std::size_t cap = kEnumerationCap);

/// M_ij = <sigma_i sigma_j>, row-major n x n, from a Walsh-Hadamard transform
/// of the probability vector (O(n 2^n)).
std::vector<double> pair_correlations(const GibbsTable& table);

/// Two independent replicas of one measure. overlap_sq uses
/// (1/n^2) sum_ij M_ij^2; abs_overlap needs the double enumeration and is
/// capped at kCoupledCap.
double two_replica_expectation(const GibbsTable& table, PairObservable obs);
double two_replica_expectation(const GibbsSpec& spec, PairObservable obs,
                               std::size_t cap = kEnumerationCap);

/// Two independent replicas drawn from two measures on the same n:
/// <R^2> = (1/n^2) sum_ij M1_ij M2_ij.
double coupled_overlap_sq(const GibbsTable& first, const GibbsTable& second);

/// Union of closed intervals of overlap values.
struct OverlapSet {
  std::vector<std::pair<double, double>> intervals;

  static OverlapSet full() { return {{{-1.0, 1.0}}}; }
  /// [-1, -eps] u [eps, 1].
  static OverlapSet i_epsilon(double eps);
  static OverlapSet point(double r) { return {{{r, r}}}; }

  /// Throws std::invalid_argument unless non-empty with a <= b inside [-1, 1].
  void validate() const;
  /// Exact test of k/n against the endpoints (no rounding of k/n).
  bool contains(long long k, std::size_t n) const;
};

/// Replica pair on (X, X_t) restricted to overlaps in `restriction`.
struct CoupledSpec {
  Disorder first;
  Disorder second;
  double beta = 0.0;
  Variant variant = Variant::free;
  OverlapSet restriction = OverlapSet::full();
};

/// D_k = sum over pairs at Hamming distance k of w1(a) w2(b), k = 0..n.
/// Direct double loop over the supports.
std::vector<double> hamming_histogram(const GibbsTable& first, const GibbsTable& second);

/// log Z^S = log sum_{R(s1,s2) in S} exp(-beta H(s1; X) - beta H(s2; X_t)).
/// Returns -inf when no pair qualifies.
double coupled_log_partition(const CoupledSpec& cspec, std::size_t cap = kCoupledCap);

/// Z^S / Z^[-1,1], computed from one histogram.
double coupled_overlap_mass(const CoupledSpec& cspec, std::size_t cap = kCoupledCap);

/// Both masses and log-partitions from a single double enumeration.
struct CoupledMass {
  double log_z_restricted = 0.0;
  double log_z_full = 0.0;
  double mass = 0.0;
};
CoupledMass coupled_mass(const CoupledSpec& cspec, std::size_t cap = kCoupledCap);

/// (1/n) log Z.
double free_energy(const GibbsSpec& spec, std::size_t cap = kEnumerationCap);

/// log |A_n|: log C(n, n/2) for even n, log(2 C(n, (n-1)/2)) for odd n.
double log_bisection_count(std::size_t n);

}  // namespace spinlab
