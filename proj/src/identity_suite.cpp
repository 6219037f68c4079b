#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "spinlab/disorder_io.hpp"
#include "spinlab/exact.hpp"
#include "spinlab/experiments.hpp"
#include "spinlab/identities.hpp"
#include "spinlab/poisson_checks.hpp"
#include "spinlab/rng.hpp"
#include "spinlab/sampling.hpp"

namespace spinlab {

namespace {

class Suite {
 public:
  explicit Suite(ExperimentResult& res) : res_(res) {
    res_.table = ResultTable({"check", "parameters", "measured", "tolerance", "passed"});
  }
  void add(const std::string& check, const std::string& params, double measured, double tol,
           bool ok) {
    res_.table.add_row({check, params, measured, tol, std::string(ok ? "yes" : "no")});
    if (!ok) res_.passed = false;
  }
  void info(const std::string& check, const std::string& params, double measured) {
    res_.table.add_row({check, params, measured, std::nan(""), std::string("info")});
  }

 private:
  ExperimentResult& res_;
};

// Random small instance: dense SK-scaled or sparse with d in [1, 8] at beta/sqrt(d).
GibbsSpec random_spec(Rng& rng, std::size_t n, bool sparse, Variant variant) {
  const double beta = 0.1 + 2.4 * rng.uniform01();
  const std::uint64_t seed = rng.next_u64();
  if (!sparse) return {sample_sk(n, seed), beta, variant};
  const double d = 1.0 + 7.0 * rng.uniform01();
  return {sample_sparse(n, d, seed), beta / std::sqrt(d), variant};
}

std::size_t random_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.uniform_index(hi - lo + 1));
}

std::string num(double x) { return format_double(x); }

void exact_checks(Suite& suite, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 1));

  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = random_size(rng, 2, 8);
    const GibbsSpec spec = random_spec(rng, n, k % 2 == 1, k % 4 < 2 ? Variant::free
                                                                      : Variant::bisection);
    worst = std::max(worst, overlap_gradient_identity_residual(spec) / static_cast<double>(n * n));
  }
  suite.add("gradient_overlap_identity", "instances=50 n<=8 dense+sparse residual/n^2", worst,
            1e-8, worst <= 1e-8);

  worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = random_size(rng, 2, 6);
    const GibbsSpec spec = random_spec(rng, n, k % 2 == 1, k % 4 < 2 ? Variant::free
                                                                      : Variant::bisection);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto an = mu_gradient(spec, i, j);
        const auto fd = mu_gradient_fd(spec, i, j, 1e-5);
        for (std::size_t s = 0; s < an.size(); ++s) worst = std::max(worst, std::abs(an[s] - fd[s]));
      }
    }
  }
  suite.add("gradient_finite_difference", "instances=20 n<=6 all entries h=1e-5", worst, 1e-6,
            worst <= 1e-6);

  int failures = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = random_size(rng, 2, 6);
    const GibbsSpec spec = random_spec(rng, n, k % 2 == 1, k % 4 < 2 ? Variant::free
                                                                      : Variant::bisection);
    const std::size_t i = rng.uniform_index(n);
    const std::size_t j = rng.uniform_index(n);
    const double xi = 4.0 * rng.uniform01() - 2.0;
    if (!xi_sandwich_check(spec, i, j, xi)) ++failures;
  }
  suite.add("xi_sandwich", "instances=1000 n<=6 xi in [-2,2]", failures, 0.0, failures == 0);

  double min_slack = std::numeric_limits<double>::infinity();
  failures = 0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = random_size(rng, 2, 6);
    const GibbsSpec spec = random_spec(rng, n, k % 2 == 1, k % 4 < 2 ? Variant::free
                                                                      : Variant::bisection);
    const TaylorBoundReport r =
        taylor_bound_report(spec, rng.uniform_index(n), rng.uniform_index(n));
    min_slack = std::min(min_slack, r.min_slack);
    if (!r.holds) ++failures;
  }
  suite.add("taylor_bound", "instances=200 n<=6 min slack", min_slack, 0.0, failures == 0);

  std::vector<double> grid;
  for (int k = -8; k <= 8; ++k) grid.push_back(0.25 * k);
  double min_second = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = random_size(rng, 2, 10);
    const GibbsSpec spec = random_spec(rng, n, k % 2 == 1, Variant::free);
    for (Variant v : {Variant::free, Variant::bisection}) {
      min_second = std::min(min_second, min_second_difference(spec.disorder, v, grid));
    }
  }
  suite.add("convexity", "instances=20 n<=10 beta in [-2,2] both variants", min_second, -1e-9,
            min_second >= -1e-9);

  for (Variant v : {Variant::free, Variant::bisection}) {
    worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const std::size_t n = random_size(rng, 2, 10);
      worst = std::max(worst, free_energy_derivative_residual(random_spec(rng, n, k % 2 == 1, v)));
    }
    suite.add("free_energy_derivative_" + to_string(v), "instances=20 n<=10", worst, 1e-6,
              worst <= 1e-6);
  }
}

void cross_term_checks(Suite& suite, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 2));
  int mismatch = 0, mismatch_sym = 0, mismatch_directed = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = random_size(rng, 2, 16);
    const double d = 8.0 * (1.0 - rng.uniform01());
    const SparseDisorder a = sample_sparse(n, d, rng.next_u64());
    std::vector<int> spins(n);
    for (auto& s : spins) s = (rng.next_u64() & 1u) ? 1 : -1;
    const SpinConfig sigma = SpinConfig::from_spins(spins);
    const SpinConfig tau = nearest_bisection(sigma);
    const double dh = hamiltonian(tau, a) - hamiltonian(sigma, a);
    const CrossTerms c = cross_terms(sigma, tau, a);
    if (dh != static_cast<double>(c.energy_change())) ++mismatch;
    const long long directed =
        4 * (static_cast<long long>(c.u_directed) - static_cast<long long>(c.v_directed));
    if (dh != static_cast<double>(directed)) ++mismatch_directed;

    // Symmetrized copy A + A^T, where the one-directional form applies.
    std::vector<Edge> both(a.edges().begin(), a.edges().end());
    for (const Edge& e : a.edges()) both.push_back({e.j, e.i, e.multiplicity});
    const SparseDisorder s(n, std::move(both));
    const CrossTerms cs = cross_terms(sigma, tau, s);
    const double dhs = hamiltonian(tau, s) - hamiltonian(sigma, s);
    const long long ds =
        4 * (static_cast<long long>(cs.u_directed) - static_cast<long long>(cs.v_directed));
    if (dhs != static_cast<double>(ds) || dhs != static_cast<double>(cs.energy_change())) {
      ++mismatch_sym;
    }
  }
  suite.add("cross_terms_multigraph", "instances=1000 n<=16 d<=8 dH=2(u-v)", mismatch, 0.0,
            mismatch == 0);
  suite.add("cross_terms_symmetric", "instances=1000 symmetrized dH=4(u_dir-v_dir)",
            mismatch_sym, 0.0, mismatch_sym == 0);
  // The one-directional form fails on generic (asymmetric) draws; reported only.
  suite.info("cross_terms_directed_on_raw_draws", "instances=1000 mismatches of 4(u_dir-v_dir)",
             mismatch_directed);

  int wrong = 0;
  std::size_t tested = 0;
  for (std::size_t n = 1; n <= 12; ++n) {
    std::vector<std::uint64_t> bis;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
      if (in_support(b, n, Variant::bisection)) bis.push_back(b);
    }
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
      int best = 64;
      for (std::uint64_t t : bis) best = std::min(best, std::popcount(b ^ t));
      const SpinConfig tau = nearest_bisection(SpinConfig::from_bits(n, b));
      const int got = std::popcount(b ^ tau.bits());
      if (!is_bisection(tau) || got != best) ++wrong;
      ++tested;
    }
  }
  suite.add("nearest_bisection_bruteforce",
            "all sigma n<=12 (" + std::to_string(tested) + " configurations)", wrong, 0.0,
            wrong == 0);
}

void poisson_checks(Suite& suite, std::uint64_t seed) {
  const auto fns = stein_chen_test_functions();
  std::uint64_t idx = 0;
  for (double lambda : {0.5, 2.0, 10.0}) {
    for (const auto& f : fns) {
      const SteinChenResult r = stein_chen_check(lambda, f.f, 1000000, derive_seed(seed, 100 + idx++));
      suite.add("stein_chen", "lambda=" + num(lambda) + " f=" + f.name + " samples=1e6 z", r.z(),
                3.0, r.z() <= 3.0);
    }
  }
  idx = 0;
  for (double lambda : {2.0, 10.0, 50.0}) {
    for (double mult : {1.0, 2.0}) {
      const double t = mult * std::sqrt(lambda);
      const PoissonTailResult r = poisson_tail_check(lambda, t, 200000, derive_seed(seed, 200 + idx++));
      suite.add("poisson_tails", "lambda=" + num(lambda) + " t=" + num(t) + " upper tail",
                r.upper_tail.mean, r.upper_bound, r.consistent());
    }
  }
}

void stochastic_checks(Suite& suite, const ExperimentConfig& cfg) {
  for (std::size_t b = 0; b < cfg.beta_list.size(); ++b) {
    const double beta = cfg.beta_list[b];
    const Estimate r =
        sk_overlap_energy_residual(cfg.n, beta, cfg.disorder_draws, derive_seed(cfg.seed, 300 + b));
    const double tol = 3.0 * r.std_error + 1e-12;
    suite.add("sk_overlap_energy",
              "n=" + std::to_string(cfg.n) + " beta=" + num(beta) +
                  " draws=" + std::to_string(cfg.disorder_draws) + " |mean residual| vs 3 SE",
              std::abs(r.mean), tol, std::abs(r.mean) <= tol);
  }

  const auto rows = sparse_overlap_energy(cfg.n, cfg.d_list, cfg.beta, cfg.disorder_draws,
                                          derive_seed(cfg.seed, 400));
  const std::string base = "n=" + std::to_string(cfg.n) + " beta=" + num(cfg.beta) +
                           " draws=" + std::to_string(cfg.disorder_draws);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    const auto& r = rows[a];
    const double diff = std::abs(r.direct.mean - r.rewritten.mean);
    const double tol = 3.0 * r.difference_se + 1e-12;
    suite.add("sparse_overlap_energy_agreement",
              base + " d=" + num(r.d) + " |direct - rewritten| vs 3 SE", diff, tol, diff <= tol);
    suite.info("sparse_overlap_energy_direct", base + " d=" + num(r.d), r.direct.mean);
    suite.info("sparse_overlap_energy_rewritten", base + " d=" + num(r.d), r.rewritten.mean);
    if (a > 0) {
      const double prev = std::abs(rows[a - 1].rewritten.mean);
      const double cur = std::abs(r.rewritten.mean);
      suite.add("sparse_overlap_energy_trend",
                base + " |residual| at d=" + num(r.d) + " vs d=" + num(rows[a - 1].d), cur, prev,
                cur <= prev);
    }
  }
}

}  // namespace

ExperimentResult run_identity_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  Suite suite(res);
  exact_checks(suite, cfg.seed);
  cross_term_checks(suite, cfg.seed);
  poisson_checks(suite, cfg.seed);
  stochastic_checks(suite, cfg);
  return res;
}

}  // namespace spinlab
