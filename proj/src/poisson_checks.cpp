#include "spinlab/poisson_checks.hpp"

#include <cmath>
#include <stdexcept>

#include "spinlab/rng.hpp"

namespace spinlab {

double SteinChenResult::z() const {
  const double se = combined_se(lhs, rhs);
  const double diff = std::abs(lhs.mean - rhs.mean);
  if (se == 0.0) return diff == 0.0 ? 0.0 : INFINITY;
  return diff / se;
}

SteinChenResult stein_chen_check(double lambda, const std::function<double(std::uint64_t)>& f,
                                 std::size_t samples, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw std::invalid_argument("stein_chen_check: lambda must be > 0");
  if (samples < 2) throw std::invalid_argument("stein_chen_check: need at least 2 samples");
  std::vector<double> lhs(samples), rhs(samples);
  Rng a(derive_seed(seed, 0));
  for (auto& v : lhs) {
    const std::uint64_t x = a.poisson(lambda);
    v = static_cast<double>(x) * f(x);
  }
  Rng b(derive_seed(seed, 1));
  for (auto& v : rhs) v = lambda * f(b.poisson(lambda) + 1);
  return {iid_estimate(lhs, "stein_chen_lhs"), iid_estimate(rhs, "stein_chen_rhs")};
}

std::vector<NamedFunction> stein_chen_test_functions() {
  return {
      {"inv_1px", [](std::uint64_t x) { return 1.0 / (1.0 + static_cast<double>(x)); }},
      {"exp_neg_half_x", [](std::uint64_t x) { return std::exp(-0.5 * static_cast<double>(x)); }},
      {"cos_x", [](std::uint64_t x) { return std::cos(static_cast<double>(x)); }},
      {"min_x_3", [](std::uint64_t x) { return static_cast<double>(x < 3 ? x : 3); }},
      {"parity", [](std::uint64_t x) { return (x % 2 == 0) ? 1.0 : -1.0; }},
  };
}

bool PoissonTailResult::consistent() const {
  return upper_tail.mean <= upper_bound + 3.0 * upper_tail.std_error &&
         lower_tail.mean <= lower_bound + 3.0 * lower_tail.std_error;
}

PoissonTailResult poisson_tail_check(double lambda, double t, std::size_t samples,
                                     std::uint64_t seed) {
  if (!(lambda > 0.0)) throw std::invalid_argument("poisson_tail_check: lambda must be > 0");
  if (!(t > 0.0)) throw std::invalid_argument("poisson_tail_check: t must be > 0");
  if (samples < 2) throw std::invalid_argument("poisson_tail_check: need at least 2 samples");
  std::vector<double> upper(samples), lower(samples);
  Rng rng(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    const auto x = static_cast<double>(rng.poisson(lambda));
    upper[k] = x >= lambda + t ? 1.0 : 0.0;
    lower[k] = x <= lambda - t ? 1.0 : 0.0;
  }
  PoissonTailResult r;
  r.upper_tail = iid_estimate(upper, "poisson_upper_tail");
  r.lower_tail = iid_estimate(lower, "poisson_lower_tail");
  r.upper_bound = std::exp(-t * t / (2.0 * (lambda + t)));
  r.lower_bound = std::exp(-t * t / (2.0 * lambda));
  return r;
}

}  // namespace spinlab
