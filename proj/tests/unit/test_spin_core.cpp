#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "spinlab/coupling_graph.hpp"
#include "spinlab/disorder.hpp"
#include "spinlab/disorder_io.hpp"
#include "spinlab/rng.hpp"
#include "spinlab/sampling.hpp"
#include "spinlab/spin_config.hpp"

using namespace spinlab;

namespace {

SpinConfig spins(std::initializer_list<int> v) {
  const std::vector<int> s(v);
  return SpinConfig::from_spins(s);
}

SpinConfig random_config(std::size_t n, Rng& rng) {
  SpinConfig s(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.next_u64() >> 63) s.flip(i);
  }
  return s;
}

DenseDisorder random_dense(std::size_t n, Rng& rng) {
  std::vector<double> e(n * n);
  for (auto& v : e) v = rng.normal();
  return DenseDisorder(n, e);
}

}  // namespace

TEST_CASE("spin config construction and access") {
  CHECK_THROWS_AS(SpinConfig(0), std::invalid_argument);
  const std::vector<int> bad = {1, 0, -1};
  CHECK_THROWS_AS(SpinConfig::from_spins(bad), std::invalid_argument);
  SpinConfig s = spins({1, -1, 1});
  CHECK(s.spin(1) == -1);
  CHECK(s.sum() == 1);
  CHECK_THROWS_AS(s.at(3), std::out_of_range);
  s.flip(1);
  CHECK(s.sum() == 3);
  CHECK(s.negated().sum() == -3);

  SpinConfig big(130);
  big.flip(129);
  big.flip(64);
  CHECK(big.minus_count() == 2);
  CHECK(big.negated().minus_count() == 128);
  CHECK(big.negated().negated() == big);
}

TEST_CASE("hamiltonian examples") {
  CHECK(hamiltonian(spins({1, 1}), DenseDisorder(2)) == 0.0);
  const SparseDisorder a(2, {{0, 1, 1}});
  CHECK(hamiltonian(spins({1, -1}), a) == -1.0);
  CHECK(hamiltonian_delta(spins({1, -1}), 0, a) == 2.0);
  CHECK_THROWS_AS(hamiltonian(spins({1, 1, 1}), a), std::invalid_argument);
  CHECK_THROWS_AS(hamiltonian_delta(spins({1, 1}), 2, a), std::out_of_range);
}

TEST_CASE("global flip symmetry and delta consistency") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(12);
    const SpinConfig s = random_config(n, rng);
    const DenseDisorder x = random_dense(n, rng);
    const SparseDisorder a = sample_sparse(n, 1.0 + 7.0 * rng.uniform01(), rng.next_u64());
    CHECK(hamiltonian(s, a) == hamiltonian(s.negated(), a));
    CHECK(hamiltonian(s, x) == doctest::Approx(hamiltonian(s.negated(), x)).epsilon(1e-12));
    const std::size_t site = rng.uniform_index(n);
    const SpinConfig f = s.flipped(site);
    CHECK(hamiltonian_delta(s, site, a) == hamiltonian(f, a) - hamiltonian(s, a));
    const double dd = hamiltonian(f, x) - hamiltonian(s, x);
    CHECK(hamiltonian_delta(s, site, x) == doctest::Approx(dd).epsilon(1e-12).scale(1.0));
    CHECK(hamiltonian_delta(f, site, a) == -hamiltonian_delta(s, site, a));

    const CouplingGraph g(a);
    CHECK(g.energy(s) == hamiltonian(s, a));
    const CouplingGraph gd(x);
    CHECK(gd.energy(s) == doctest::Approx(hamiltonian(s, x)).epsilon(1e-12));
  }
  const SpinConfig s = spins({1, -1, -1});
  CHECK(hamiltonian_delta(s, 1, DenseDisorder(3)) == 0.0);
}

TEST_CASE("overlap and magnetization") {
  const SpinConfig a = spins({1, 1, -1, -1});
  const SpinConfig b = spins({1, -1, 1, -1});
  CHECK(overlap(a, a) == 1.0);
  CHECK(overlap(a, a.negated()) == -1.0);
  CHECK(overlap(a, b) == 0.0);
  CHECK_THROWS_AS(overlap(a, spins({1})), std::invalid_argument);
  CHECK(magnetization(SpinConfig(5)) == 1.0);
  CHECK(magnetization(a) == 0.0);
  CHECK(magnetization(spins({1, 1, -1})) == doctest::Approx(1.0 / 3.0));

  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(150);
    const SpinConfig x = random_config(n, rng);
    const SpinConfig y = random_config(n, rng);
    const auto nn = static_cast<double>(n);
    CHECK(overlap(x, y) == doctest::Approx(1.0 - 2.0 * static_cast<double>(hamming_distance(x, y)) / nn));
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) cost += (x[i] - y[i]) * (x[i] - y[i]);
    CHECK(cost / nn == doctest::Approx(2.0 * (1.0 - overlap(x, y))));
  }
}

TEST_CASE("bisection membership") {
  CHECK(is_bisection(spins({1, 1, -1, -1})));
  CHECK_FALSE(is_bisection(spins({1, 1, 1, -1})));
  CHECK(is_bisection(spins({1, 1, -1})));
  CHECK(is_bisection(spins({-1, -1, 1})));
}

TEST_CASE("nearest bisection examples") {
  const SpinConfig b = spins({1, -1, 1, -1});
  CHECK(nearest_bisection(b) == b);
  const SpinConfig t4 = nearest_bisection(SpinConfig(4));
  CHECK(is_bisection(t4));
  CHECK(overlap(t4, SpinConfig(4)) == 0.0);
  CHECK(t4 == spins({-1, -1, 1, 1}));
  const SpinConfig t3 = nearest_bisection(SpinConfig(3));
  CHECK(t3.minus_count() == 1);
  CHECK(overlap(t3, SpinConfig(3)) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("nearest bisection matches brute-force argmax for all n <= 12") {
  for (std::size_t n = 1; n <= 12; ++n) {
    std::vector<std::uint64_t> bis;
    for (std::uint64_t t = 0; t < (1u << n); ++t) {
      if (is_bisection(SpinConfig::from_bits(n, t))) bis.push_back(t);
    }
    for (std::uint64_t s = 0; s < (1u << n); ++s) {
      long long best = -1000;
      for (std::uint64_t t : bis) {
        best = std::max(best, static_cast<long long>(n) - 2 * std::popcount(s ^ t));
      }
      const SpinConfig sigma = SpinConfig::from_bits(n, s);
      const SpinConfig tau = nearest_bisection(sigma);
      REQUIRE(is_bisection(tau));
      REQUIRE(overlap_numerator(sigma, tau) == best);
      REQUIRE(hamming_distance(sigma, tau) == bisection_flip_count(sigma));
    }
  }
}

TEST_CASE("cross terms") {
  SUBCASE("bisection input gives zero") {
    const SpinConfig s = spins({1, -1, 1, -1});
    const SparseDisorder a(4, {{0, 1, 2}, {2, 3, 1}});
    const CrossTerms c = cross_terms(s, nearest_bisection(s), a);
    CHECK(c.u == 0);
    CHECK(c.v == 0);
    CHECK(c.delta == 0);
  }
  SUBCASE("empty multigraph") {
    const SpinConfig s(6);
    const CrossTerms c = cross_terms(s, nearest_bisection(s), SparseDisorder(6));
    CHECK(c.u == 0);
    CHECK(c.v == 0);
    CHECK(c.delta == 3);
  }
  SUBCASE("rejects a tau that is not a nearest bisection") {
    CHECK_THROWS_AS(cross_terms(spins({1, 1, 1, -1}), spins({-1, -1, 1, 1}), SparseDisorder(4)),
                    std::invalid_argument);
    CHECK_THROWS_AS(cross_terms(SpinConfig(4), spins({1, 1, 1, -1}), SparseDisorder(4)),
                    std::invalid_argument);
  }
  SUBCASE("n = 4, all plus, six edges") {
    const SpinConfig s(4);
    const SparseDisorder a(4, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}, {3, 0, 1}, {1, 2, 1}});
    const SpinConfig tau = nearest_bisection(s);
    const CrossTerms c = cross_terms(s, tau, a);
    CHECK(c.energy_change() == hamiltonian(tau, a) - hamiltonian(s, a));
  }
  SUBCASE("energy change identity on random instances") {
    Rng rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 1 + rng.uniform_index(16);
      const SparseDisorder a = sample_sparse(n, 0.5 + 7.5 * rng.uniform01(), rng.next_u64());
      SpinConfig s = random_config(n, rng);
      const SpinConfig tau = nearest_bisection(s);
      const CrossTerms c = cross_terms(s, tau, a);
      REQUIRE(static_cast<double>(c.energy_change()) == hamiltonian(tau, a) - hamiltonian(s, a));
      // Negating both configurations describes the same pair.
      const CrossTerms cn = cross_terms(s.negated(), tau.negated(), a);
      REQUIRE(cn.u == c.u);
      REQUIRE(cn.v == c.v);
    }
  }
  SUBCASE("one-directional sums: symmetric vs asymmetric") {
    // Symmetric A: the one-directional form 4(U - V) is exact.
    const SparseDisorder sym(4, {{0, 2, 1}, {2, 0, 1}, {0, 3, 2}, {3, 0, 2}});
    const SpinConfig s(4);
    const SpinConfig tau = nearest_bisection(s);  // flips sites 0 and 1
    const CrossTerms c = cross_terms(s, tau, sym);
    CHECK(4 * (static_cast<long long>(c.u_directed) - static_cast<long long>(c.v_directed)) ==
          hamiltonian(tau, sym) - hamiltonian(s, sym));
    // A single ordered entry from outside S into S: the one-directional sums miss it.
    const SparseDisorder asym(4, {{2, 0, 1}});
    const CrossTerms d = cross_terms(s, tau, asym);
    CHECK(d.u_directed == 0);
    CHECK(d.v_directed == 0);
    CHECK(hamiltonian(tau, asym) - hamiltonian(s, asym) == -2.0);
    CHECK(d.energy_change() == -2);
  }
}

TEST_CASE("disorder containers") {
  const SparseDisorder a(3, {{0, 1, 1}, {0, 1, 2}, {2, 2, 1}});
  CHECK(a.multiplicity(0, 1) == 3);
  CHECK(a.multiplicity(1, 0) == 0);
  CHECK(a.total_edges() == 4);
  CHECK(a.self_loop_total() == 1);
  CHECK_THROWS_AS(SparseDisorder(3, {{0, 3, 1}}), std::out_of_range);
  CHECK_THROWS_AS(SparseDisorder(3, {{0, 1, 0}}), std::invalid_argument);
  const SparseDisorder b(3, {{1, 0, 1}});
  CHECK((a + b).total_edges() == 5);
  CHECK(to_dense(a)(0, 1) == 3.0);
  CHECK_THROWS_AS(DenseDisorder(2, {1.0, 2.0, std::nan(""), 0.0}), std::invalid_argument);
  const CouplingGraph g(a);
  CHECK(g.weight(0, 1) == 3.0);
  CHECK(g.weight(1, 0) == 3.0);
  CHECK(g.diagonal() == 1.0);
}

TEST_CASE("serialization round trips") {
  const SparseDisorder a = sample_sparse(20, 4.0, 99);
  std::stringstream ss;
  write_sparse_text(ss, a, {4.0, 99});
  SparseHeader h;
  const SparseDisorder back = read_sparse_text(ss, &h);
  CHECK(back == a);
  CHECK(h.d == 4.0);
  CHECK(h.seed == 99);

  const DenseDisorder x = sample_sk(7, 5);
  std::stringstream bin;
  write_dense_binary(bin, x);
  CHECK(read_dense_binary(bin) == x);
  std::stringstream txt;
  write_dense_text(txt, x);
  CHECK(read_dense_text(txt) == x);

  std::stringstream bad("n 3 d 1 seed 0\n1 4 1\n");
  CHECK_THROWS(read_sparse_text(bad));
  std::stringstream bad2("n 3 d 1 seed 0\n1 2 0\n");
  CHECK_THROWS(read_sparse_text(bad2));
  std::stringstream text("n 2 d 1 seed 0\n1 2 1\n");
  CHECK(read_sparse_text(text).multiplicity(0, 1) == 1);
}
