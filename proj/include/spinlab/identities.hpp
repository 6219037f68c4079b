#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "spinlab/estimate.hpp"
#include "spinlab/exact.hpp"

namespace spinlab {

/// d mu(sigma) / d X_ij = -beta (sigma_i sigma_j - <sigma_i sigma_j>) mu(sigma),
/// one entry per bit pattern (zero off the support). n <= kGradientCap.
std::vector<double> mu_gradient(const GibbsSpec& spec, std::size_t i, std::size_t j);

/// Same, reusing an enumerated table and its pair correlations.
std::vector<double> mu_gradient(const GibbsTable& table, const std::vector<double>& correlations,
                                std::size_t i, std::size_t j);

/// Central finite difference (mu(X + h J_ij) - mu(X - h J_ij)) / (2h).
/// Sparse disorder is converted to dense for the perturbation.
std::vector<double> mu_gradient_fd(const GibbsSpec& spec, std::size_t i, std::size_t j, double h);

/// |sum_sigma sum_ij sigma_i sigma_j dmu/dX_ij + beta n^2 (1 - <R^2>)|, the
/// left side summed from the analytic gradient vectors.
double overlap_gradient_identity_residual(const GibbsSpec& spec);

/// e^{-2|beta xi|} mu(X) <= mu(X + xi J_ij) <= e^{2|beta xi|} mu(X) for every
/// sigma, with multiplicative slack 1 + 1e-12.
bool xi_sandwich_check(const GibbsSpec& spec, std::size_t i, std::size_t j, double xi);

struct TaylorBoundReport {
  double max_lhs = 0.0;    ///< max_sigma |mu(X+J) - mu(X) - dmu/dX_ij|
  double min_slack = 0.0;  ///< min_sigma (bound - lhs)
  bool holds = true;
};

/// |mu(X + J_ij) - mu(X) - dmu/dX_ij| <= 3 beta^2 max_{xi in [0,1]} mu(X + xi J_ij)
/// for every sigma, where spec.beta is the scaled inverse temperature
/// (beta/sqrt(d) for sparse disorder). The max over xi is bounded above by
/// e^{|beta|/63} times the max over 64 equally spaced grid points.
TaylorBoundReport taylor_bound_report(const GibbsSpec& spec, std::size_t i, std::size_t j);
bool taylor_bound_check(const GibbsSpec& spec, std::size_t i, std::size_t j);

/// |(Phi(beta+h) - Phi(beta-h)) / (2h) + (1/n) <H>| with Phi = (1/n) log Z.
double free_energy_derivative_residual(const GibbsSpec& spec, double h = 1e-5);

/// Minimum over the grid of log Z(b+h) - 2 log Z(b) + log Z(b-h).
double min_second_difference(const Disorder& disorder, Variant variant,
                             const std::vector<double>& betas, double h = 1e-3);

/// Disorder draw k uses seed derive_seed(seed, k); draws run in parallel and
/// results are kept in draw order. Each inner call returns a fixed-length row.
std::vector<std::vector<double>> quenched_rows(
    std::size_t draws, std::uint64_t seed,
    const std::function<std::vector<double>(std::uint64_t draw_seed)>& inner);

/// Mean and iid standard error of inner(generator(seed_k)) over draws >= 2.
Estimate quenched_average(const std::function<Disorder(std::uint64_t)>& generator,
                          const std::function<double(const Disorder&)>& inner,
                          std::size_t draws, std::uint64_t seed);

}  // namespace spinlab
