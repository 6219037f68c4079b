#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "spinlab/poisson_checks.hpp"
#include "spinlab/rng.hpp"
#include "spinlab/sampling.hpp"

using namespace spinlab;

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  std::size_t n = 0;
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  m.n = x.size();
  for (double v : x) m.mean += v;
  m.mean /= static_cast<double>(x.size());
  for (double v : x) m.var += (v - m.mean) * (v - m.mean);
  m.var /= static_cast<double>(x.size() - 1);
  return m;
}

// |estimate - target| <= k standard errors
bool within(double estimate, double target, double se, double k = 4.0) {
  return std::abs(estimate - target) <= k * se;
}

}  // namespace

TEST_CASE("seed derivation is the documented splitmix64 mix") {
  CHECK(derive_seed(0, 0) == 0xe220a8397b1dcdafULL);
  CHECK(derive_seed(1, 0) == 0xe4d971771b652c20ULL);
  CHECK(derive_seed(42, 7) == 0xb4346c5a4ac089c3ULL);
  CHECK(derive_seed(~0ULL, 123456789) == 0xd7cd5d7d954ac206ULL);
}

TEST_CASE("poisson sampler law") {
  for (double lambda : {0.5, 3.0, 9.99, 10.0, 37.5, 1000.0}) {
    Rng rng(derive_seed(17, static_cast<std::uint64_t>(lambda * 100)));
    std::vector<double> x(200000);
    for (auto& v : x) v = static_cast<double>(rng.poisson(lambda));
    const Moments m = moments(x);
    const auto n = static_cast<double>(x.size());
    CHECK(within(m.mean, lambda, std::sqrt(lambda / n)));
    // Var of the sample variance for Poisson: (mu4 - sigma^4 (n-3)/(n-1)) / n, mu4 = l + 3 l^2.
    const double se_var = std::sqrt((lambda + 2.0 * lambda * lambda) / n);
    CHECK(within(m.var, lambda, se_var));
  }
  // Cell frequencies against the exact pmf on the rejection branch.
  const double lambda = 15.0;
  Rng rng(5);
  const std::size_t draws = 400000;
  std::vector<double> count(60, 0.0);
  for (std::size_t k = 0; k < draws; ++k) {
    const auto x = rng.poisson(lambda);
    if (x < count.size()) count[x] += 1.0;
  }
  for (std::size_t k = 3; k < 35; ++k) {
    const double pk = std::exp(-lambda + static_cast<double>(k) * std::log(lambda) -
                               std::lgamma(static_cast<double>(k) + 1.0));
    const double se = std::sqrt(pk * (1.0 - pk) / static_cast<double>(draws));
    CHECK(within(count[k] / static_cast<double>(draws), pk, se, 4.5));
  }
  CHECK(Rng(1).poisson(0.0) == 0);
  CHECK_THROWS(Rng(1).poisson(-1.0));
}

TEST_CASE("sample_sk moments and determinism") {
  const std::size_t n = 1000;
  const DenseDisorder g = sample_sk(n, 123);
  const std::vector<double> e(g.entries().begin(), g.entries().end());
  const Moments m = moments(e);
  const double var = 1.0 / (2.0 * static_cast<double>(n));
  const auto count = static_cast<double>(e.size());
  CHECK(within(m.mean, 0.0, std::sqrt(var / count)));
  CHECK(within(m.var, var, std::sqrt(2.0 / count) * var));
  CHECK(sample_sk(30, 9) == sample_sk(30, 9));
  CHECK_FALSE(sample_sk(30, 9) == sample_sk(30, 10));
}

TEST_CASE("sample_sparse edge counts") {
  std::vector<double> totals(1000);
  for (std::size_t k = 0; k < totals.size(); ++k) {
    totals[k] = static_cast<double>(sample_sparse(100, 4.0, derive_seed(1, k)).total_edges());
  }
  const Moments m = moments(totals);
  CHECK(within(m.mean, 200.0, std::sqrt(200.0 / 1000.0)));

  std::size_t empty = 0;
  const std::size_t draws = 20000;
  for (std::size_t k = 0; k < draws; ++k) empty += sample_sparse(10, 0.01, derive_seed(2, k)).empty();
  const double p = std::exp(-0.05);
  CHECK(within(static_cast<double>(empty) / draws, p, std::sqrt(p * (1 - p) / draws)));

  CHECK(sample_sparse(50, 3.0, 77) == sample_sparse(50, 3.0, 77));
  CHECK_THROWS(sample_sparse(10, 0.0, 1));
}

TEST_CASE("sample_sparse entries are iid Poisson(d/2n), self-loops included") {
  const std::size_t n = 6;
  const double d = 3.0;
  const double rate = d / (2.0 * n);
  const std::size_t draws = 40000;
  std::vector<double> diag, off;
  for (std::size_t k = 0; k < draws; ++k) {
    const SparseDisorder a = sample_sparse(n, d, derive_seed(3, k));
    diag.push_back(static_cast<double>(a.multiplicity(2, 2)));
    off.push_back(static_cast<double>(a.multiplicity(1, 4)));
  }
  for (const auto* v : {&diag, &off}) {
    const Moments m = moments(*v);
    CHECK(within(m.mean, rate, std::sqrt(rate / draws)));
    CHECK(within(m.var, rate, std::sqrt((rate + 2 * rate * rate) / draws)));
  }
}

TEST_CASE("couple_sk") {
  const DenseDisorder g = sample_sk(50, 1);
  CHECK(couple_sk(g, 0.0, 2) == g);
  CHECK_THROWS(couple_sk(g, 1.5, 2));

  const std::size_t n = 1000;
  const DenseDisorder big = sample_sk(n, 4);
  for (double t : {0.5, 1.0}) {
    const DenseDisorder gt = couple_sk(big, t, 5);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < n * n; ++k) {
      const double x = big.entries()[k], y = gt.entries()[k];
      sxy += x * y;
      sxx += x * x;
      syy += y * y;
    }
    const double rho = sxy / std::sqrt(sxx * syy);
    const double target = std::sqrt(1.0 - t);
    const double se = (1.0 - target * target) / std::sqrt(static_cast<double>(n * n)) + 1e-6;
    CHECK(within(rho, target, se));
    const std::vector<double> e(gt.entries().begin(), gt.entries().end());
    const Moments m = moments(e);
    const double var = 1.0 / (2.0 * n);
    CHECK(within(m.mean, 0.0, std::sqrt(var / (n * n))));
    CHECK(within(m.var, var, std::sqrt(2.0 / (n * n)) * var));
  }
}

TEST_CASE("couple_sparse") {
  const SparsePair p0 = couple_sparse(40, 4.0, 0.0, 9);
  CHECK(p0.first() == p0.second());
  CHECK(p0.first_private.empty());

  const std::size_t n = 10;
  const double d = 4.0;
  const double rate = d / (2.0 * n);
  const std::size_t draws = 100000;
  for (double t : {0.3, 1.0}) {
    std::vector<double> prod, first_total, second_total;
    prod.reserve(draws * 2);
    for (std::size_t k = 0; k < draws; ++k) {
      const SparsePair p = couple_sparse(n, d, t, derive_seed(11, k));
      const SparseDisorder a = p.first();
      const SparseDisorder b = p.second();
      first_total.push_back(static_cast<double>(a.total_edges()));
      second_total.push_back(static_cast<double>(b.total_edges()));
      for (auto [i, j] : {std::pair{0, 3}, std::pair{5, 5}}) {
        prod.push_back((static_cast<double>(a.multiplicity(i, j)) - rate) *
                       (static_cast<double>(b.multiplicity(i, j)) - rate));
      }
    }
    const Moments c = moments(prod);
    CHECK(within(c.mean, (1.0 - t) * rate, std::sqrt(c.var / static_cast<double>(prod.size()))));
    for (const auto* tot : {&first_total, &second_total}) {
      const Moments m = moments(*tot);
      const double mu = d * n / 2.0;
      CHECK(within(m.mean, mu, std::sqrt(mu / draws)));
      CHECK(within(m.var, mu, std::sqrt((mu + 2 * mu * mu) / draws)));
    }
  }
}

TEST_CASE("stein-chen examples") {
  const auto one = stein_chen_check(2.0, [](std::uint64_t) { return 1.0; }, 100000, 1);
  CHECK(one.rhs.mean == 2.0);
  CHECK(within(one.lhs.mean, 2.0, one.lhs.std_error, 3.0));
  const auto lin = stein_chen_check(1.0, [](std::uint64_t x) { return static_cast<double>(x); }, 200000, 2);
  CHECK(within(lin.lhs.mean, 2.0, lin.lhs.std_error, 4.0));
  CHECK(within(lin.rhs.mean, 2.0, lin.rhs.std_error, 4.0));
  const auto inv = stein_chen_check(
      2.0, [](std::uint64_t x) { return 1.0 / (1.0 + static_cast<double>(x)); }, 1000000, 3);
  CHECK(inv.z() <= 3.0);
  CHECK(stein_chen_test_functions().size() == 5);
}

TEST_CASE("poisson tail bounds") {
  const auto r = poisson_tail_check(10.0, 10.0, 200000, 4);
  CHECK(r.upper_bound == doctest::Approx(0.0820849986238988).epsilon(1e-12));
  CHECK(r.consistent());
  CHECK(r.upper_tail.mean <= r.upper_bound);
  const auto small = poisson_tail_check(10.0, 1e-9, 1000, 5);
  CHECK(small.upper_bound == doctest::Approx(1.0));
  const auto low = poisson_tail_check(100.0, 50.0, 100000, 6);
  CHECK(low.lower_bound == doctest::Approx(3.726653172078671e-06).epsilon(1e-10));
  CHECK(low.lower_tail.mean == 0.0);
  CHECK(low.consistent());
}
