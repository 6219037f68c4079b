#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "spinlab/config.hpp"
#include "spinlab/output.hpp"

namespace spinlab {

/// Largest n at which experiments use exact enumeration instead of MCMC.
constexpr std::size_t kExperimentExactCap = 16;

/// A main table plus optional secondary tables written next to it.
struct ExperimentResult {
  ResultTable table;
  std::vector<std::pair<std::string, ResultTable>> extra;
  /// False only when an identity check failed.
  bool passed = true;
};

/// One step of a gap trend: |mean gap_k| - |mean gap_{k+1}| with the iid
/// standard error of the per-draw differences s_k g_{k,i} - s_{k+1} g_{k+1,i},
/// s_k = sign(mean gap_k). The draws are paired, so shared terms cancel.
struct TrendStep {
  double decrease = 0.0;
  double std_error = 0.0;
};
/// gaps[level][draw]; every level needs the same draw count >= 2.
std::vector<TrendStep> trend_steps(const std::vector<std::vector<double>>& gaps);

/// Rows per (variant, d): (1/n) E<H_SK>_beta against the centered sparse
/// energy (1/(sqrt(d) n)) E<H_d - (d/(2n)) (sum sigma)^2>_{beta/sqrt(d)}, with
/// the raw and self-loop-subtracted sparse energies as extra columns.
ExperimentResult run_energy_correspondence(const ExperimentConfig& cfg);
/// Rows per (variant, d): E<R^2> for SK at beta against sparse at beta/sqrt(d).
ExperimentResult run_overlap_correspondence(const ExperimentConfig& cfg);
/// Rows per (model, t) of the two-chain E<R^2> on coupled disorder pairs;
/// exact when n <= kExperimentExactCap.
ExperimentResult run_chaos(const ExperimentConfig& cfg);
/// Rows per (model, variant, n) of the exact coupled mass of |R| >= epsilon
/// and its per-site log-ratio, plus full-set and beta = 0, t = 1 sanity rows.
ExperimentResult run_restricted_mass(const ExperimentConfig& cfg);
/// Rows per (variant, d) of Phi_d(beta/sqrt(d)) against Phi_SK(beta); the
/// extra table `free_vs_bis` has Phi_free - Phi_bis over n_list at fixed d.
ExperimentResult run_interp_free_energy(const ExperimentConfig& cfg);
/// Rows per (variant, d) of sqrt(d) E<m^2>_{beta/sqrt(d)} with the beta = 0
/// closed form sqrt(d)/n (free) for comparison.
ExperimentResult run_magnetization_suppression(const ExperimentConfig& cfg);
/// Pass/fail table of every exact and stochastic identity check.
ExperimentResult run_identity_suite(const ExperimentConfig& cfg);

/// Dispatch on cfg.experiment.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Per-draw residual (1/n) <H_SK> + (beta/2) (1 - <R^2>) from exact
/// enumeration, averaged over draws; SK draw k uses derive_seed(seed, k).
Estimate sk_overlap_energy_residual(std::size_t n, double beta, std::size_t draws,
                                    std::uint64_t seed);

/// Sparse overlap-energy residual at one d, by two estimators over the same
/// draws: the direct (1/(sqrt(d) n)) <H> - (sqrt(d)/2) <m^2> + (beta/2)(1 - <R^2>),
/// and the equal-mean form (sqrt(d)/(2 n^2)) sum_{i != j} [f(M_ij) - M_ij]
/// + (beta/2)(1 - <R^2>) with f(c) = (c - tau)/(1 - c tau), tau = tanh(beta/sqrt(d)).
struct SparseOverlapEnergy {
  double d = 0.0;
  Estimate direct;
  Estimate rewritten;
  /// iid error of the per-draw difference of the two estimators.
  double difference_se = 0.0;
};
std::vector<SparseOverlapEnergy> sparse_overlap_energy(std::size_t n, const std::vector<double>& d_list,
                                                       double beta, std::size_t draws,
                                                       std::uint64_t seed);

/// P(|R| >= eps) for two independent uniform configurations (free) or
/// bisections (bisection, even n), by the exact counting formula.
double null_overlap_tail(std::size_t n, double eps, Variant variant);

}  // namespace spinlab
