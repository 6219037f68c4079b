#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "spinlab/coupling_graph.hpp"
#include "spinlab/estimate.hpp"
#include "spinlab/exact.hpp"
#include "spinlab/rng.hpp"
#include "spinlab/spin_config.hpp"

namespace spinlab {

/// Sampler state for one chain. Owns its graph, configuration, cached
/// off-diagonal local fields h_i = sum_{j != i} (X_ij + X_ji) sigma(j) and RNG.
class ChainState {
 public:
  /// Random start: uniform over {-1,+1}^n (free) or over the bisections with
  /// sum 0 / +1 (bisection, even / odd n).
  ChainState(const GibbsSpec& spec, std::uint64_t seed);
  ChainState(const GibbsSpec& spec, SpinConfig start, std::uint64_t seed);

  const GibbsSpec& spec() const noexcept { return spec_; }
  double beta() const noexcept { return spec_.beta; }
  Variant variant() const noexcept { return spec_.variant; }
  const CouplingGraph& graph() const noexcept { return graph_; }
  const SpinConfig& sigma() const noexcept { return sigma_; }
  std::span<const double> fields() const noexcept { return fields_; }
  std::size_t sweep_count() const noexcept { return sweeps_; }
  std::size_t size() const noexcept { return sigma_.size(); }

  /// H = diagonal + (1/2) sum_i sigma(i) h_i from the cached fields.
  double energy() const;
  /// Largest |cached - recomputed| field difference.
  double field_error() const;

  /// Probability that a heat-bath update of `site` sets it to +1.
  double plus_probability(std::size_t site) const;
  /// H change of exchanging a +1 site and a -1 site.
  double swap_delta(std::size_t plus_site, std::size_t minus_site) const;
  /// Metropolis acceptance min(1, exp(-beta delta)).
  double swap_acceptance(double delta) const;

  std::span<const std::uint32_t> plus_sites() const noexcept { return plus_; }
  std::span<const std::uint32_t> minus_sites() const noexcept { return minus_; }

  /// n heat-bath updates at uniformly chosen sites. Free variant only.
  void glauber_sweep();
  /// n swap proposals. Bisection variant only.
  void swap_sweep();
  /// The sweep matching the variant.
  void sweep();

 private:
  void init();
  void flip(std::size_t site);
  void heat_bath_update(std::size_t site);
  void swap_update();

  GibbsSpec spec_;
  CouplingGraph graph_;
  SpinConfig sigma_;
  std::vector<double> fields_;
  std::vector<std::uint32_t> plus_, minus_, position_;
  std::vector<double> plus_table_;  // heat-bath P(+1) by integer field, sparse only
  long long table_offset_ = 0;
  Rng rng_;
  std::size_t sweeps_ = 0;
};

/// Free functions mirroring the member sweeps.
ChainState& glauber_sweep(ChainState& state);
ChainState& swap_sweep(ChainState& state);

/// Exact one-update transition law from the current configuration, as
/// (next bit pattern, probability) pairs; a sweep applies n of these.
/// Uses the same acceptance code as the sweeps. n <= 62.
std::vector<std::pair<std::uint64_t, double>> single_update_transitions(const ChainState& state);

constexpr std::size_t kDefaultBurnIn = std::numeric_limits<std::size_t>::max();

struct McmcParams {
  std::size_t sweeps = 100000;
  /// kDefaultBurnIn means 10% of sweeps.
  std::size_t burn_in = kDefaultBurnIn;
  std::size_t batches = kDefaultBatches;

  std::size_t effective_burn_in() const { return burn_in == kDefaultBurnIn ? sweeps / 10 : burn_in; }
  /// Throws std::invalid_argument unless sweeps > burn_in and at least 20
  /// post-burn-in sweeps remain.
  void validate() const;
};

enum class McmcObservable { energy, magnetization_sq, overlap_sq, abs_overlap };

struct McmcResult {
  Estimate estimate;
  SeriesDiagnostics diagnostics;
};

/// All observables from one run of two independent replica chains.
/// energy and magnetization_sq average the two replicas' per-sweep values;
/// overlap observables use R(sigma1_t, sigma2_t). Replica r uses stream
/// derive_seed(seed, r).
struct ReplicaRun {
  McmcResult energy;
  McmcResult magnetization_sq;
  McmcResult overlap_sq;
  McmcResult abs_overlap;

  const McmcResult& get(McmcObservable obs) const;
};

ReplicaRun run_replicas(const GibbsSpec& first, const GibbsSpec& second, const McmcParams& params,
                        std::uint64_t seed);

/// Time average after burn-in with batch-means error. Overlap observables
/// run two chains on the same disorder.
McmcResult estimate(const GibbsSpec& spec, McmcObservable obs, const McmcParams& params,
                    std::uint64_t seed);

/// Two chains on the coupled pair (X, X_t); obs must be an overlap observable.
McmcResult estimate_coupled(const GibbsSpec& first, const GibbsSpec& second, McmcObservable obs,
                            const McmcParams& params, std::uint64_t seed);

/// (1/n) log Z(beta_max) = Phi(0) - int_0^beta_max (1/n) <H>_b db by the
/// trapezoidal rule on a uniform grid of `grid_points` MCMC energy
/// estimates; grid point k uses stream derive_seed(seed, k). beta is used as
/// given (sparse callers pass beta / sqrt(d)).
Estimate thermo_integrate(const Disorder& disorder, Variant variant, double beta_max,
                          std::size_t grid_points, const McmcParams& params, std::uint64_t seed);

struct ChaosPoint {
  double t = 0.0;
  Estimate overlap_sq;  ///< disorder average of the two-chain <R^2>
  double mean_ess = 0.0;
  std::size_t nonstationary_draws = 0;
};

/// Sparse chaos curve at inverse temperature beta / sqrt(d). For t index a
/// and draw k the coupled pair uses seed derive_seed(derive_seed(seed, a), k)
/// and the replica chains run_replicas(..., derive_seed(pair seed, 1000)). The
/// standard error is the
/// between-draw spread of per-draw time averages.
std::vector<ChaosPoint> chaos_curve(std::size_t n, double d, double beta,
                                    const std::vector<double>& t_values, const McmcParams& params,
                                    std::size_t disorder_draws, std::uint64_t seed,
                                    Variant variant = Variant::free);

/// SK analogue with chains on g and g_t.
std::vector<ChaosPoint> chaos_curve_sk(std::size_t n, double beta,
                                       const std::vector<double>& t_values,
                                       const McmcParams& params, std::size_t disorder_draws,
                                       std::uint64_t seed, Variant variant = Variant::free);

}  // namespace spinlab
