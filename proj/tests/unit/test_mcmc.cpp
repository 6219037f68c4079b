#include <cmath>
#include <stdexcept>
#include <map>
#include <vector>

#include "doctest.h"
#include "spinlab/exact.hpp"
#include "spinlab/mcmc.hpp"
#include "spinlab/rng.hpp"
#include "spinlab/sampling.hpp"

using namespace spinlab;

namespace {

bool within(const Estimate& e, double target, double k = 3.0) {
  return std::abs(e.mean - target) <= k * e.std_error;
}

McmcParams params(std::size_t sweeps) {
  McmcParams p;
  p.sweeps = sweeps;
  return p;
}

// Checks stationarity and detailed balance of the single-update kernel.
void check_kernel(const GibbsSpec& spec) {
  const std::size_t n = disorder_size(spec.disorder);
  const GibbsTable t = gibbs_table(spec);
  const std::size_t size = std::size_t{1} << n;
  for (long long cls : {1LL, -1LL, 0LL}) {
    // Free: one class holding everything. Bisection: sum 0 (even n) or sums +1 / -1 (odd n).
    if (spec.variant == Variant::free && cls != 0) continue;
    if (spec.variant == Variant::bisection && (n % 2 == 0) != (cls == 0)) continue;
    auto member = [&](std::uint64_t b) {
      if (spec.variant == Variant::free) return true;
      return static_cast<long long>(n) - 2 * std::popcount(b) == cls;
    };
    double mass = 0.0;
    for (std::uint64_t b = 0; b < size; ++b) {
      if (member(b)) mass += t.probability(b);
    }
    std::vector<std::vector<double>> kernel(size, std::vector<double>(size, 0.0));
    for (std::uint64_t b = 0; b < size; ++b) {
      if (!member(b)) continue;
      const ChainState state(spec, SpinConfig::from_bits(n, b), 1);
      double row = 0.0;
      for (const auto& [to, p] : single_update_transitions(state)) {
        REQUIRE(member(to));
        kernel[b][to] += p;
        row += p;
      }
      CHECK(std::abs(row - 1.0) <= 1e-12);
    }
    for (std::uint64_t y = 0; y < size; ++y) {
      if (!member(y)) continue;
      double flow = 0.0;
      for (std::uint64_t x = 0; x < size; ++x) {
        if (!member(x)) continue;
        flow += t.probability(x) / mass * kernel[x][y];
        CHECK(std::abs(t.probability(x) * kernel[x][y] - t.probability(y) * kernel[y][x]) <= 1e-12);
      }
      CHECK(std::abs(flow - t.probability(y) / mass) <= 1e-12);
    }
  }
}

}  // namespace

TEST_CASE("detailed balance of the single-update kernels") {
  Rng rng(1);
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      const double beta = 0.3 + 1.5 * rng.uniform01();
      const Disorder sk = sample_sk(n, rng.next_u64());
      const Disorder sp = sample_sparse(n, 6.0, rng.next_u64());
      for (const Disorder* x : {&sk, &sp}) {
        check_kernel({*x, beta, Variant::free});
        if (n >= 2) check_kernel({*x, beta, Variant::bisection});
      }
    }
  }
}

TEST_CASE("chain preconditions") {
  const GibbsSpec bis{sample_sk(4, 1), 1.0, Variant::bisection};
  CHECK_THROWS(ChainState(bis, SpinConfig(4), 1));
  ChainState free_chain({sample_sk(4, 1), 1.0, Variant::free}, 2);
  CHECK_THROWS(free_chain.swap_sweep());
  ChainState bis_chain(bis, 3);
  CHECK(is_bisection(bis_chain.sigma()));
  CHECK_THROWS(bis_chain.glauber_sweep());
}

TEST_CASE("cached fields stay exact") {
  Rng rng(2);
  for (Variant v : {Variant::free, Variant::bisection}) {
    ChainState sparse({sample_sparse(40, 8.0, rng.next_u64()), 0.4, v}, rng.next_u64());
    ChainState dense({sample_sk(30, rng.next_u64()), 1.3, v}, rng.next_u64());
    for (int s = 0; s < 1000; ++s) {
      sparse.sweep();
      dense.sweep();
      if (s % 97 == 0) {
        CHECK(sparse.field_error() == 0.0);
        CHECK(dense.field_error() <= 1e-9);
        if (v == Variant::bisection) {
          CHECK(is_bisection(sparse.sigma()));
          CHECK(is_bisection(dense.sigma()));
        }
      }
    }
    CHECK(sparse.sweep_count() == 1000);
    CHECK(sparse.energy() == hamiltonian(sparse.sigma(), sparse.spec().disorder));
  }
}

TEST_CASE("beta zero and trivial systems") {
  const SparseDisorder loop(1, {{0, 0, 3}});
  ChainState one({loop, 2.0, Variant::free}, 1);
  CHECK(one.plus_probability(0) == 0.5);

  ChainState two({SparseDisorder(2, {{0, 1, 1}}), 0.7, Variant::bisection}, SpinConfig::from_bits(2, 0b01), 2);
  const auto tr = single_update_transitions(two);
  std::map<std::uint64_t, double> law(tr.begin(), tr.end());
  CHECK(law[0b10] == doctest::Approx(1.0));

  const std::size_t n = 10;
  const GibbsSpec s{sample_sparse(n, 4.0, 3), 0.0, Variant::free};
  CHECK(within(estimate(s, McmcObservable::magnetization_sq, params(20000), 4).estimate, 1.0 / n));
  CHECK(within(estimate(s, McmcObservable::overlap_sq, params(20000), 5).estimate, 1.0 / n));
  const SparsePair p = couple_sparse(n, 4.0, 1.0, 6);
  CHECK(within(estimate_coupled({p.first(), 0.0}, {p.second(), 0.0}, McmcObservable::overlap_sq,
                                params(20000), 7).estimate, 1.0 / n));
}

TEST_CASE("chains agree with exact enumeration") {
  const SparseDisorder a = sample_sparse(12, 8.0, 11);
  const double beta = 1.5 / std::sqrt(8.0);
  for (Variant v : {Variant::free, Variant::bisection}) {
    const GibbsSpec s{a, beta, v};
    const GibbsTable t = gibbs_table(s);
    const ReplicaRun run = run_replicas(s, s, params(30000), 12);
    CHECK(within(run.energy.estimate, gibbs_expectation(t, Observable::energy)));
    CHECK(within(run.overlap_sq.estimate, two_replica_expectation(t, PairObservable::overlap_sq)));
    if (v == Variant::free) {
      CHECK(within(run.magnetization_sq.estimate, gibbs_expectation(t, Observable::magnetization_sq)));
    } else {
      CHECK(run.magnetization_sq.estimate.mean == 0.0);
    }
  }
}

TEST_CASE("estimates are reproducible") {
  const GibbsSpec s{sample_sk(20, 1), 1.0, Variant::free};
  const auto a = estimate(s, McmcObservable::energy, params(500), 9);
  const auto b = estimate(s, McmcObservable::energy, params(500), 9);
  CHECK(a.estimate.mean == b.estimate.mean);
  CHECK(a.estimate.std_error == b.estimate.std_error);
  ChainState x(s, 3), y(s, 3);
  for (int k = 0; k < 50; ++k) {
    x.sweep();
    y.sweep();
    REQUIRE(x.sigma() == y.sigma());
  }
}

TEST_CASE("batch means requirements") {
  const GibbsSpec s{sample_sk(5, 1), 1.0, Variant::free};
  McmcParams p;
  p.sweeps = 21;
  p.burn_in = 2;
  CHECK_THROWS_AS(estimate(s, McmcObservable::energy, p, 1), std::invalid_argument);
  p.burn_in = 30;
  CHECK_THROWS_AS(estimate(s, McmcObservable::energy, p, 1), std::invalid_argument);
  p.burn_in = 1;
  CHECK_NOTHROW(estimate(s, McmcObservable::energy, p, 1));
  CHECK(params(1000).effective_burn_in() == 100);
}

TEST_CASE("thermodynamic integration") {
  const SparseDisorder a = sample_sparse(12, 8.0, 21);
  const Estimate zero = thermo_integrate(a, Variant::free, 0.0, 5, params(100), 1);
  CHECK(zero.mean == std::log(2.0));
  CHECK(zero.std_error == 0.0);
  CHECK(thermo_integrate(a, Variant::bisection, 0.0, 5, params(100), 1).mean ==
        doctest::Approx(std::log(924.0) / 12.0));
  CHECK_THROWS(thermo_integrate(a, Variant::free, 1.0, 4, params(100), 1));

  const double beta = 1.0 / std::sqrt(8.0);
  const Estimate ti = thermo_integrate(a, Variant::free, beta, 11, params(20000), 2);
  CHECK(std::abs(ti.mean - free_energy({a, beta, Variant::free})) <= 3.0 * ti.std_error + 1e-3);

  const DenseDisorder g = sample_sk(12, 22);
  const Estimate tb = thermo_integrate(g, Variant::bisection, 1.0, 11, params(20000), 3);
  CHECK(std::abs(tb.mean - free_energy({g, 1.0, Variant::bisection})) <= 3.0 * tb.std_error + 1e-3);
}

TEST_CASE("chaos curve basics") {
  const std::vector<double> ts = {0.0, 0.5, 1.0};
  const auto flat = chaos_curve(10, 4.0, 0.0, ts, params(4000), 6, 1);
  REQUIRE(flat.size() == 3);
  for (const auto& p : flat) CHECK(within(p.overlap_sq, 0.1, 3.5));

  // At t = 0 the pair is one disorder; the curve entry is the same-disorder replica estimate.
  const auto curve = chaos_curve(10, 4.0, 1.5, {0.0}, params(400), 2, 7);
  double mean = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    const std::uint64_t pair_seed = derive_seed(derive_seed(7, 0), k);
    const SparsePair p = couple_sparse(10, 4.0, 0.0, pair_seed);
    const GibbsSpec s{p.first(), 1.5 / 2.0, Variant::free};
    mean += run_replicas(s, s, params(400), derive_seed(pair_seed, 1000)).overlap_sq.estimate.mean / 2.0;
  }
  CHECK(curve[0].overlap_sq.mean == doctest::Approx(mean).epsilon(1e-15));

  const auto sk = chaos_curve_sk(10, 0.0, {0.2}, params(2000), 4, 3);
  CHECK(within(sk[0].overlap_sq, 0.1, 3.5));
}
