#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spinlab/estimate.hpp"

namespace spinlab {

struct SteinChenResult {
  Estimate lhs;  ///< E[X f(X)]
  Estimate rhs;  ///< lambda E[f(X + 1)]
  /// |lhs - rhs| in units of the combined standard error.
  double z() const;
};

/// Both sides estimated from independent Poisson(lambda) streams
/// derive_seed(seed, 0) and derive_seed(seed, 1).
SteinChenResult stein_chen_check(double lambda, const std::function<double(std::uint64_t)>& f,
                                 std::size_t samples, std::uint64_t seed);

struct NamedFunction {
  std::string name;
  std::function<double(std::uint64_t)> f;
};

/// Five bounded test functions used by the identity suite.
std::vector<NamedFunction> stein_chen_test_functions();

struct PoissonTailResult {
  Estimate upper_tail;  ///< P[X >= lambda + t]
  double upper_bound = 1.0;  ///< exp(-t^2 / (2 (lambda + t)))
  Estimate lower_tail;  ///< P[X <= lambda - t]
  double lower_bound = 1.0;  ///< exp(-t^2 / (2 lambda))

  /// Both empirical tails within 3 SE of their bounds or below them.
  bool consistent() const;
};

PoissonTailResult poisson_tail_check(double lambda, double t, std::size_t samples,
                                     std::uint64_t seed);

}  // namespace spinlab
