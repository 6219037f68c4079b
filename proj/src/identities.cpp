#include "spinlab/identities.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "spinlab/parallel.hpp"
#include "spinlab/rng.hpp"

namespace spinlab {

namespace {

void require_gradient_cap(std::size_t n) {
  if (n > kGradientCap) {
    throw std::invalid_argument("gradient oracles need n <= " + std::to_string(kGradientCap));
  }
}

void require_entry(std::size_t i, std::size_t j, std::size_t n) {
  if (i >= n || j >= n) throw std::out_of_range("entry index out of range");
}

DenseDisorder as_dense(const Disorder& x) {
  if (const auto* d = std::get_if<DenseDisorder>(&x)) return *d;
  return to_dense(std::get<SparseDisorder>(x));
}

GibbsSpec perturbed(const GibbsSpec& spec, std::size_t i, std::size_t j, double xi) {
  return {as_dense(spec.disorder).plus_unit(i, j, xi), spec.beta, spec.variant};
}

double spin_product(std::uint64_t bits, std::size_t i, std::size_t j) {
  return (((bits >> i) ^ (bits >> j)) & 1u) ? -1.0 : 1.0;
}

}  // namespace

std::vector<double> mu_gradient(const GibbsTable& table, const std::vector<double>& correlations,
                                std::size_t i, std::size_t j) {
  require_entry(i, j, table.n);
  const double c = correlations[i * table.n + j];
  std::vector<double> g(table.weights.size(), 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (table.weights[k] == 0.0) continue;
    g[k] = -table.beta * (spin_product(k, i, j) - c) * table.probability(k);
  }
  return g;
}

std::vector<double> mu_gradient(const GibbsSpec& spec, std::size_t i, std::size_t j) {
  require_gradient_cap(disorder_size(spec.disorder));
  const GibbsTable t = gibbs_table(spec);
  return mu_gradient(t, pair_correlations(t), i, j);
}

std::vector<double> mu_gradient_fd(const GibbsSpec& spec, std::size_t i, std::size_t j, double h) {
  const std::size_t n = disorder_size(spec.disorder);
  require_gradient_cap(n);
  require_entry(i, j, n);
  const auto up = gibbs_table(perturbed(spec, i, j, h)).probabilities();
  const auto down = gibbs_table(perturbed(spec, i, j, -h)).probabilities();
  std::vector<double> g(up.size());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = (up[k] - down[k]) / (2.0 * h);
  return g;
}

double overlap_gradient_identity_residual(const GibbsSpec& spec) {
  const std::size_t n = disorder_size(spec.disorder);
  require_gradient_cap(n);
  const GibbsTable t = gibbs_table(spec);
  const auto m = pair_correlations(t);
  double lhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto g = mu_gradient(t, m, i, j);
      for (std::size_t k = 0; k < g.size(); ++k) lhs += spin_product(k, i, j) * g[k];
    }
  }
  const auto nn = static_cast<double>(n);
  const double r2 = two_replica_expectation(t, PairObservable::overlap_sq);
  const double rhs = -spec.beta * nn * nn * (1.0 - r2);
  return std::abs(lhs - rhs);
}

bool xi_sandwich_check(const GibbsSpec& spec, std::size_t i, std::size_t j, double xi) {
  const std::size_t n = disorder_size(spec.disorder);
  require_entry(i, j, n);
  const auto base = gibbs_table(spec).probabilities();
  const auto moved = gibbs_table(perturbed(spec, i, j, xi)).probabilities();
  const double factor = std::exp(2.0 * std::abs(spec.beta * xi));
  constexpr double slack = 1.0 + 1e-12;
  for (std::size_t k = 0; k < base.size(); ++k) {
    if (moved[k] > base[k] * factor * slack) return false;
    if (moved[k] * factor * slack < base[k]) return false;
  }
  return true;
}

TaylorBoundReport taylor_bound_report(const GibbsSpec& spec, std::size_t i, std::size_t j) {
  const std::size_t n = disorder_size(spec.disorder);
  require_gradient_cap(n);
  require_entry(i, j, n);
  const GibbsTable t = gibbs_table(spec);
  const auto base = t.probabilities();
  const auto grad = mu_gradient(t, pair_correlations(t), i, j);
  const auto shifted = gibbs_table(perturbed(spec, i, j, 1.0)).probabilities();

  constexpr std::size_t kGrid = 64;
  const double h = 1.0 / static_cast<double>(kGrid - 1);
  std::vector<double> grid_max(base.size(), 0.0);
  for (std::size_t g = 0; g < kGrid; ++g) {
    const auto p = gibbs_table(perturbed(spec, i, j, static_cast<double>(g) * h)).probabilities();
    for (std::size_t k = 0; k < p.size(); ++k) grid_max[k] = std::max(grid_max[k], p[k]);
  }
  // Every xi in [0, 1] lies within h/2 of a grid point; the sandwich then
  // gives mu(X + xi J) <= e^{2|beta| h/2} mu(X + xi_k J).
  const double inflate = std::exp(std::abs(spec.beta) * h);
  const double coef = 3.0 * spec.beta * spec.beta;

  TaylorBoundReport r;
  r.min_slack = INFINITY;
  for (std::size_t k = 0; k < base.size(); ++k) {
    const double lhs = std::abs(shifted[k] - base[k] - grad[k]);
    const double bound = coef * inflate * grid_max[k];
    r.max_lhs = std::max(r.max_lhs, lhs);
    r.min_slack = std::min(r.min_slack, bound - lhs);
    if (lhs > bound * (1.0 + 1e-12) + 1e-15) r.holds = false;
  }
  return r;
}

bool taylor_bound_check(const GibbsSpec& spec, std::size_t i, std::size_t j) {
  return taylor_bound_report(spec, i, j).holds;
}

double free_energy_derivative_residual(const GibbsSpec& spec, double h) {
  const auto n = static_cast<double>(disorder_size(spec.disorder));
  const double up = log_partition({spec.disorder, spec.beta + h, spec.variant});
  const double down = log_partition({spec.disorder, spec.beta - h, spec.variant});
  const double derivative = (up - down) / (2.0 * h * n);
  const double energy = gibbs_expectation(spec, Observable::energy) / n;
  return std::abs(derivative + energy);
}

double min_second_difference(const Disorder& disorder, Variant variant,
                             const std::vector<double>& betas, double h) {
  double worst = INFINITY;
  for (double b : betas) {
    const double up = log_partition({disorder, b + h, variant});
    const double mid = log_partition({disorder, b, variant});
    const double down = log_partition({disorder, b - h, variant});
    worst = std::min(worst, up - 2.0 * mid + down);
  }
  return worst;
}

std::vector<std::vector<double>> quenched_rows(
    std::size_t draws, std::uint64_t seed,
    const std::function<std::vector<double>(std::uint64_t draw_seed)>& inner) {
  std::vector<std::vector<double>> rows(draws);
  parallel_for(draws, [&](std::size_t k) { rows[k] = inner(derive_seed(seed, k)); });
  return rows;
}

Estimate quenched_average(const std::function<Disorder(std::uint64_t)>& generator,
                          const std::function<double(const Disorder&)>& inner,
                          std::size_t draws, std::uint64_t seed) {
  if (draws < 2) throw std::invalid_argument("quenched_average: need at least 2 draws");
  const auto rows = quenched_rows(draws, seed, [&](std::uint64_t s) {
    return std::vector<double>{inner(generator(s))};
  });
  std::vector<double> v(draws);
  for (std::size_t k = 0; k < draws; ++k) v[k] = rows[k][0];
  return iid_estimate(v, "quenched");
}

}  // namespace spinlab
