#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace spinlab {

/// Probability vector over {-1,+1}^n indexed by bit pattern (bit i set means
/// spin i is -1).
struct ExplicitDistribution {
  std::size_t n = 0;
  std::vector<double> probabilities;

  /// Throws std::invalid_argument unless length 2^n, nonnegative, sum 1 within 1e-12.
  void validate() const;

  static ExplicitDistribution point_mass(std::size_t n, std::uint64_t bits);
  static ExplicitDistribution uniform(std::size_t n);
  /// Product measure with P(spin i = +1) = plus[i].
  static ExplicitDistribution product(const std::vector<double>& plus);
};

/// Transport cost c(a, b) = (1/n) sum_i (a_i - b_i)^2 = 2 (1 - R(a, b)).
double transport_cost(std::uint64_t a, std::uint64_t b, std::size_t n);

/// Optimal value of the transport problem between p and q under
/// transport_cost, by the transportation simplex on the supports.
double optimal_transport_cost(const ExplicitDistribution& p, const ExplicitDistribution& q);

/// sqrt of the optimal transport cost. n <= 8.
double exact_w2(const ExplicitDistribution& p, const ExplicitDistribution& q);

/// E|R(a, b)| for independent a ~ p, b ~ q.
double expected_abs_overlap(const ExplicitDistribution& p, const ExplicitDistribution& q);

struct W2BoundReport {
  double lhs = 0.0;  ///< |E_{mu1 x nu1}|R| - E_{mu2 x nu2}|R||
  double rhs = 0.0;  ///< W2(mu1, mu2) + W2(nu1, nu2)
  bool holds = true;  ///< lhs <= rhs + 1e-9
};

W2BoundReport w2_overlap_bound(const ExplicitDistribution& mu1, const ExplicitDistribution& mu2,
                               const ExplicitDistribution& nu1, const ExplicitDistribution& nu2);
bool w2_overlap_bound_check(const ExplicitDistribution& mu1, const ExplicitDistribution& mu2,
                            const ExplicitDistribution& nu1, const ExplicitDistribution& nu2);

}  // namespace spinlab
