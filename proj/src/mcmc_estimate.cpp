#include <cmath>
#include <stdexcept>
#include <string>

#include "spinlab/mcmc.hpp"
#include "spinlab/parallel.hpp"
#include "spinlab/sampling.hpp"

namespace spinlab {

namespace {

McmcResult summarize(const std::vector<double>& series, std::size_t batches, const char* method) {
  McmcResult r;
  r.estimate = batch_means(series, batches, &r.diagnostics);
  r.estimate.method = method;
  return r;
}

double square(double x) { return x * x; }

}  // namespace

void McmcParams::validate() const {
  const std::size_t burn = effective_burn_in();
  if (sweeps <= burn) throw std::invalid_argument("MCMC needs sweeps > burn_in");
  if (sweeps - burn < kMinBatches) {
    throw std::invalid_argument("MCMC needs at least " + std::to_string(kMinBatches) +
                                " post-burn-in sweeps for batch means");
  }
  if (batches < kMinBatches) {
    throw std::invalid_argument("batch means needs at least " + std::to_string(kMinBatches) + " batches");
  }
}

const McmcResult& ReplicaRun::get(McmcObservable obs) const {
  switch (obs) {
    case McmcObservable::energy: return energy;
    case McmcObservable::magnetization_sq: return magnetization_sq;
    case McmcObservable::overlap_sq: return overlap_sq;
    case McmcObservable::abs_overlap: return abs_overlap;
  }
  throw std::invalid_argument("unknown observable");
}

ReplicaRun run_replicas(const GibbsSpec& first, const GibbsSpec& second, const McmcParams& params,
                        std::uint64_t seed) {
  params.validate();
  if (disorder_size(first.disorder) != disorder_size(second.disorder)) {
    throw std::invalid_argument("replica chains must have the same n");
  }
  ChainState a(first, derive_seed(seed, 0));
  ChainState b(second, derive_seed(seed, 1));
  const std::size_t burn = params.effective_burn_in();
  const std::size_t kept = params.sweeps - burn;
  std::vector<double> energy, msq, rsq, rabs;
  energy.reserve(kept);
  msq.reserve(kept);
  rsq.reserve(kept);
  rabs.reserve(kept);
  for (std::size_t s = 0; s < params.sweeps; ++s) {
    a.sweep();
    b.sweep();
    if (s < burn) continue;
    energy.push_back(0.5 * (a.energy() + b.energy()));
    msq.push_back(0.5 * (square(magnetization(a.sigma())) + square(magnetization(b.sigma()))));
    const double r = overlap(a.sigma(), b.sigma());
    rsq.push_back(r * r);
    rabs.push_back(std::abs(r));
  }
  return {summarize(energy, params.batches, "mcmc_batch_means"),
          summarize(msq, params.batches, "mcmc_batch_means"),
          summarize(rsq, params.batches, "mcmc_batch_means"),
          summarize(rabs, params.batches, "mcmc_batch_means")};
}

McmcResult estimate(const GibbsSpec& spec, McmcObservable obs, const McmcParams& params,
                    std::uint64_t seed) {
  if (obs == McmcObservable::overlap_sq || obs == McmcObservable::abs_overlap) {
    return run_replicas(spec, spec, params, seed).get(obs);
  }
  params.validate();
  ChainState c(spec, derive_seed(seed, 0));
  const std::size_t burn = params.effective_burn_in();
  std::vector<double> series;
  series.reserve(params.sweeps - burn);
  for (std::size_t s = 0; s < params.sweeps; ++s) {
    c.sweep();
    if (s < burn) continue;
    series.push_back(obs == McmcObservable::energy ? c.energy() : square(magnetization(c.sigma())));
  }
  return summarize(series, params.batches, "mcmc_batch_means");
}

McmcResult estimate_coupled(const GibbsSpec& first, const GibbsSpec& second, McmcObservable obs,
                            const McmcParams& params, std::uint64_t seed) {
  if (obs != McmcObservable::overlap_sq && obs != McmcObservable::abs_overlap) {
    throw std::invalid_argument("estimate_coupled supports overlap observables only");
  }
  return run_replicas(first, second, params, seed).get(obs);
}

Estimate thermo_integrate(const Disorder& disorder, Variant variant, double beta_max,
                          std::size_t grid_points, const McmcParams& params, std::uint64_t seed) {
  if (grid_points < 5) throw std::invalid_argument("thermo_integrate needs grid_points >= 5");
  const std::size_t n = disorder_size(disorder);
  const auto nn = static_cast<double>(n);
  const double phi0 = variant == Variant::free ? std::log(2.0) : log_bisection_count(n) / nn;
  if (beta_max == 0.0) return exact_estimate(phi0, "thermo_integrate");
  params.validate();

  std::vector<Estimate> energies(grid_points);
  const double h = beta_max / static_cast<double>(grid_points - 1);
  parallel_for(grid_points, [&](std::size_t k) {
    const GibbsSpec spec{disorder, h * static_cast<double>(k), variant};
    energies[k] = estimate(spec, McmcObservable::energy, params, derive_seed(seed, k)).estimate;
  });
  double integral = 0.0, var = 0.0;
  std::size_t count = energies[0].count;
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double w = (k == 0 || k + 1 == grid_points) ? 0.5 * h : h;
    integral += w * energies[k].mean;
    var += square(w * energies[k].std_error);
    count = std::min(count, energies[k].count);
  }
  return {phi0 - integral / nn, std::sqrt(var) / nn, count, "thermo_integrate"};
}

namespace {

template <class MakeSpecs>
std::vector<ChaosPoint> chaos_driver(const std::vector<double>& t_values, const McmcParams& params,
                                     std::size_t draws, std::uint64_t seed, MakeSpecs&& make) {
  params.validate();
  if (draws < 2) throw std::invalid_argument("chaos curve needs at least 2 disorder draws");
  for (double t : t_values) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("t values must lie in [0, 1]");
  }
  const std::size_t tasks = t_values.size() * draws;
  std::vector<McmcResult> results(tasks);
  parallel_for(tasks, [&](std::size_t task) {
    const std::size_t a = task / draws;
    const std::size_t k = task % draws;
    const std::uint64_t pair_seed = derive_seed(derive_seed(seed, a), k);
    const auto [first, second] = make(t_values[a], pair_seed);
    results[task] = run_replicas(first, second, params, derive_seed(pair_seed, 1000)).overlap_sq;
  });
  std::vector<ChaosPoint> curve;
  for (std::size_t a = 0; a < t_values.size(); ++a) {
    std::vector<double> means(draws);
    ChaosPoint p;
    p.t = t_values[a];
    for (std::size_t k = 0; k < draws; ++k) {
      const McmcResult& r = results[a * draws + k];
      means[k] = r.estimate.mean;
      p.mean_ess += r.diagnostics.ess / static_cast<double>(draws);
      if (r.diagnostics.nonstationary) ++p.nonstationary_draws;
    }
    p.overlap_sq = iid_estimate(means, "disorder_average_of_mcmc");
    curve.push_back(p);
  }
  return curve;
}

}  // namespace

std::vector<ChaosPoint> chaos_curve(std::size_t n, double d, double beta,
                                    const std::vector<double>& t_values, const McmcParams& params,
                                    std::size_t disorder_draws, std::uint64_t seed, Variant variant) {
  const double beta_eff = beta / std::sqrt(d);
  return chaos_driver(t_values, params, disorder_draws, seed, [&](double t, std::uint64_t s) {
    const SparsePair pair = couple_sparse(n, d, t, s);
    return std::pair{GibbsSpec{pair.first(), beta_eff, variant},
                     GibbsSpec{pair.second(), beta_eff, variant}};
  });
}

std::vector<ChaosPoint> chaos_curve_sk(std::size_t n, double beta,
                                       const std::vector<double>& t_values,
                                       const McmcParams& params, std::size_t disorder_draws,
                                       std::uint64_t seed, Variant variant) {
  return chaos_driver(t_values, params, disorder_draws, seed, [&](double t, std::uint64_t s) {
    DenseDisorder g = sample_sk(n, derive_seed(s, 0));
    DenseDisorder gt = couple_sk(g, t, derive_seed(s, 1));
    return std::pair{GibbsSpec{std::move(g), beta, variant}, GibbsSpec{std::move(gt), beta, variant}};
  });
}

}  // namespace spinlab
