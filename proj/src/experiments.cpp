#include "spinlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spinlab/exact.hpp"
#include "spinlab/identities.hpp"
#include "spinlab/mcmc.hpp"
#include "spinlab/parallel.hpp"
#include "spinlab/rng.hpp"
#include "spinlab/sampling.hpp"

namespace spinlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Observables {
  double energy = 0.0;
  double m2 = 0.0;
  double r2 = 0.0;
  double phi = kNaN;
  double nonstationary = 0.0;
};

Observables exact_observables(const GibbsSpec& spec) {
  const GibbsTable t = gibbs_table(spec);
  Observables o;
  o.energy = gibbs_expectation(t, Observable::energy);
  o.m2 = gibbs_expectation(t, Observable::magnetization_sq);
  o.r2 = two_replica_expectation(t, PairObservable::overlap_sq);
  o.phi = t.log_z / static_cast<double>(t.n);
  return o;
}

Observables mcmc_observables(const GibbsSpec& spec, const ExperimentConfig& cfg, std::uint64_t seed,
                             bool want_phi) {
  const McmcParams params = cfg.mcmc();
  const ReplicaRun run = run_replicas(spec, spec, params, seed);
  Observables o;
  o.energy = run.energy.estimate.mean;
  o.m2 = run.magnetization_sq.estimate.mean;
  o.r2 = run.overlap_sq.estimate.mean;
  o.nonstationary = (run.energy.diagnostics.nonstationary || run.overlap_sq.diagnostics.nonstationary)
                        ? 1.0
                        : 0.0;
  if (want_phi) {
    o.phi = thermo_integrate(spec.disorder, spec.variant, spec.beta, cfg.grid_points, params,
                             derive_seed(seed, 7))
                .mean;
  }
  return o;
}

Observables observables(const GibbsSpec& spec, const ExperimentConfig& cfg, std::uint64_t seed,
                        bool want_phi) {
  if (disorder_size(spec.disorder) <= kExperimentExactCap) return exact_observables(spec);
  return mcmc_observables(spec, cfg, seed, want_phi);
}

const char* method_for(std::size_t n) { return n <= kExperimentExactCap ? "exact" : "mcmc"; }

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t idx) {
  std::vector<double> v(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) v[k] = rows[k][idx];
  return v;
}

double count_flags(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

void require_draws(const ExperimentConfig& cfg) {
  if (cfg.disorder_draws < 2) throw std::invalid_argument("experiment needs disorder_draws >= 2");
}

// Per-draw layout of the correspondence driver, per variant:
// SK block [E, m2, r2, phi, ns], then per d [E, m2, r2, phi, ns, self-loops].
constexpr std::size_t kSkWidth = 5;
constexpr std::size_t kDWidth = 6;

std::size_t variant_width(std::size_t d_count) { return kSkWidth + kDWidth * d_count; }

struct CorrespondenceData {
  std::vector<Variant> variants;
  std::vector<std::vector<double>> rows;  // [draw][...]

  std::size_t sk(std::size_t v, std::size_t field, std::size_t d_count) const {
    return v * variant_width(d_count) + field;
  }
  std::size_t sparse(std::size_t v, std::size_t a, std::size_t field, std::size_t d_count) const {
    return v * variant_width(d_count) + kSkWidth + a * kDWidth + field;
  }
};

// Draw k shares one SK matrix across all d; sparse draws are independent per d.
CorrespondenceData correspondence_data(const ExperimentConfig& cfg, bool want_phi) {
  require_draws(cfg);
  CorrespondenceData data;
  data.variants = cfg.variants();
  const std::size_t n = cfg.n;
  const auto& d_list = cfg.d_list;
  data.rows = quenched_rows(cfg.disorder_draws, cfg.seed, [&](std::uint64_t s) {
    std::vector<double> row;
    row.reserve(data.variants.size() * variant_width(d_list.size()));
    const DenseDisorder g = sample_sk(n, derive_seed(s, 0));
    std::vector<SparseDisorder> sparse;
    for (std::size_t a = 0; a < d_list.size(); ++a) {
      sparse.push_back(sample_sparse(n, d_list[a], derive_seed(s, 1 + a)));
    }
    for (std::size_t v = 0; v < data.variants.size(); ++v) {
      const Variant var = data.variants[v];
      const std::uint64_t vs = derive_seed(s, 1000 + v);
      const Observables o = observables({g, cfg.beta, var}, cfg, derive_seed(vs, 0), want_phi);
      row.insert(row.end(), {o.energy, o.m2, o.r2, o.phi, o.nonstationary});
      for (std::size_t a = 0; a < d_list.size(); ++a) {
        const GibbsSpec spec{sparse[a], cfg.beta / std::sqrt(d_list[a]), var};
        const Observables q = observables(spec, cfg, derive_seed(vs, 1 + a), want_phi);
        row.insert(row.end(), {q.energy, q.m2, q.r2, q.phi, q.nonstationary,
                               static_cast<double>(sparse[a].self_loop_total())});
      }
    }
    return row;
  });
  return data;
}

std::vector<double> elementwise(const std::vector<double>& a, const std::vector<double>& b,
                                double (*op)(double, double)) {
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = op(a[k], b[k]);
  return out;
}

double minus(double x, double y) { return x - y; }

Cell step_cell(const std::vector<TrendStep>& steps, std::size_t a, bool se) {
  if (a == 0) return kNaN;
  return se ? steps[a - 1].std_error : steps[a - 1].decrease;
}

double mean_of(const std::vector<double>& v) { return iid_estimate(v).mean; }

}  // namespace

std::vector<TrendStep> trend_steps(const std::vector<std::vector<double>>& gaps) {
  std::vector<TrendStep> out;
  for (std::size_t k = 0; k + 1 < gaps.size(); ++k) {
    const auto& a = gaps[k];
    const auto& b = gaps[k + 1];
    if (a.size() != b.size() || a.size() < 2) {
      throw std::invalid_argument("trend_steps: levels need equal draw counts >= 2");
    }
    const double sa = mean_of(a) < 0.0 ? -1.0 : 1.0;
    const double sb = mean_of(b) < 0.0 ? -1.0 : 1.0;
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = sa * a[i] - sb * b[i];
    const Estimate e = iid_estimate(diff);
    out.push_back({e.mean, e.std_error});
  }
  return out;
}

ExperimentResult run_energy_correspondence(const ExperimentConfig& cfg) {
  cfg.validate();
  const CorrespondenceData data = correspondence_data(cfg, false);
  const std::size_t dn = cfg.d_list.size();
  const double n = static_cast<double>(cfg.n);
  ExperimentResult res;
  res.table = ResultTable({"variant", "d", "n", "beta", "draws", "method", "sk_energy",
                           "sk_energy_se", "sparse_energy", "sparse_energy_se", "gap", "gap_se",
                           "step_decrease", "step_se", "sparse_energy_raw", "sparse_energy_raw_se",
                           "raw_gap", "raw_gap_se", "sparse_energy_selfloop",
                           "sparse_energy_selfloop_se", "selfloop_gap", "selfloop_gap_se",
                           "nonstationary_draws"});
  for (std::size_t v = 0; v < data.variants.size(); ++v) {
    std::vector<double> sk = column(data.rows, data.sk(v, 0, dn));
    for (double& x : sk) x /= n;
    std::vector<std::vector<double>> centered(dn), raw(dn), loops(dn);
    std::vector<double> flags(dn);
    for (std::size_t a = 0; a < dn; ++a) {
      const double rd = std::sqrt(cfg.d_list[a]);
      const auto e = column(data.rows, data.sparse(v, a, 0, dn));
      const auto m2 = column(data.rows, data.sparse(v, a, 1, dn));
      const auto sl = column(data.rows, data.sparse(v, a, 5, dn));
      for (std::size_t k = 0; k < e.size(); ++k) {
        raw[a].push_back(e[k] / (rd * n));
        centered[a].push_back(raw[a].back() - 0.5 * rd * m2[k]);
        loops[a].push_back((e[k] - sl[k]) / (rd * n));
      }
      flags[a] = count_flags(column(data.rows, data.sparse(v, a, 4, dn))) +
                 count_flags(column(data.rows, data.sk(v, 4, dn)));
    }
    std::vector<std::vector<double>> gaps(dn);
    for (std::size_t a = 0; a < dn; ++a) gaps[a] = elementwise(centered[a], sk, minus);
    const auto steps = trend_steps(gaps);
    const Estimate sk_e = iid_estimate(sk);
    for (std::size_t a = 0; a < dn; ++a) {
      const Estimate c = iid_estimate(centered[a]);
      const Estimate g = iid_estimate(gaps[a]);
      const Estimate r = iid_estimate(raw[a]);
      const Estimate rg = iid_estimate(elementwise(raw[a], sk, minus));
      const Estimate l = iid_estimate(loops[a]);
      const Estimate lg = iid_estimate(elementwise(loops[a], sk, minus));
      res.table.add_row({to_string(data.variants[v]), cfg.d_list[a], static_cast<long long>(cfg.n),
                         cfg.beta, static_cast<long long>(cfg.disorder_draws), method_for(cfg.n),
                         sk_e.mean, sk_e.std_error, c.mean, c.std_error, std::abs(g.mean),
                         g.std_error, step_cell(steps, a, false), step_cell(steps, a, true), r.mean,
                         r.std_error, std::abs(rg.mean), rg.std_error, l.mean, l.std_error,
                         std::abs(lg.mean), lg.std_error, static_cast<long long>(flags[a])});
    }
  }
  return res;
}

ExperimentResult run_overlap_correspondence(const ExperimentConfig& cfg) {
  cfg.validate();
  const CorrespondenceData data = correspondence_data(cfg, false);
  const std::size_t dn = cfg.d_list.size();
  ExperimentResult res;
  res.table = ResultTable({"variant", "d", "n", "beta", "draws", "method", "sk_overlap_sq",
                           "sk_overlap_sq_se", "sparse_overlap_sq", "sparse_overlap_sq_se", "gap",
                           "gap_se", "step_decrease", "step_se", "nonstationary_draws"});
  for (std::size_t v = 0; v < data.variants.size(); ++v) {
    const auto sk = column(data.rows, data.sk(v, 2, dn));
    std::vector<std::vector<double>> sp(dn), gaps(dn);
    for (std::size_t a = 0; a < dn; ++a) {
      sp[a] = column(data.rows, data.sparse(v, a, 2, dn));
      gaps[a] = elementwise(sp[a], sk, minus);
    }
    const auto steps = trend_steps(gaps);
    const Estimate sk_e = iid_estimate(sk);
    for (std::size_t a = 0; a < dn; ++a) {
      const Estimate s = iid_estimate(sp[a]);
      const Estimate g = iid_estimate(gaps[a]);
      const double flags = count_flags(column(data.rows, data.sparse(v, a, 4, dn))) +
                           count_flags(column(data.rows, data.sk(v, 4, dn)));
      res.table.add_row({to_string(data.variants[v]), cfg.d_list[a], static_cast<long long>(cfg.n),
                         cfg.beta, static_cast<long long>(cfg.disorder_draws), method_for(cfg.n),
                         sk_e.mean, sk_e.std_error, s.mean, s.std_error, std::abs(g.mean),
                         g.std_error, step_cell(steps, a, false), step_cell(steps, a, true),
                         static_cast<long long>(flags)});
    }
  }
  return res;
}

ExperimentResult run_interp_free_energy(const ExperimentConfig& cfg) {
  cfg.validate();
  const CorrespondenceData data = correspondence_data(cfg, true);
  const std::size_t dn = cfg.d_list.size();
  ExperimentResult res;
  res.table = ResultTable({"variant", "d", "n", "beta", "draws", "method", "sk_phi", "sk_phi_se",
                           "sparse_phi", "sparse_phi_se", "gap", "gap_se", "step_decrease",
                           "step_se"});
  for (std::size_t v = 0; v < data.variants.size(); ++v) {
    const auto sk = column(data.rows, data.sk(v, 3, dn));
    std::vector<std::vector<double>> sp(dn), gaps(dn);
    for (std::size_t a = 0; a < dn; ++a) {
      sp[a] = column(data.rows, data.sparse(v, a, 3, dn));
      gaps[a] = elementwise(sp[a], sk, minus);
    }
    const auto steps = trend_steps(gaps);
    const Estimate sk_e = iid_estimate(sk);
    for (std::size_t a = 0; a < dn; ++a) {
      const Estimate s = iid_estimate(sp[a]);
      const Estimate g = iid_estimate(gaps[a]);
      res.table.add_row({to_string(data.variants[v]), cfg.d_list[a], static_cast<long long>(cfg.n),
                         cfg.beta, static_cast<long long>(cfg.disorder_draws), method_for(cfg.n),
                         sk_e.mean, sk_e.std_error, s.mean, s.std_error, std::abs(g.mean),
                         g.std_error, step_cell(steps, a, false), step_cell(steps, a, true)});
    }
  }

  // Free minus bisection free energy of the sparse model over n at fixed d.
  const std::size_t nn = cfg.n_list.size();
  const double beta = cfg.beta / std::sqrt(cfg.d);
  const auto rows = quenched_rows(cfg.disorder_draws, derive_seed(cfg.seed, 0x5eed), [&](std::uint64_t s) {
    std::vector<double> row;
    for (std::size_t b = 0; b < nn; ++b) {
      const SparseDisorder a = sample_sparse(cfg.n_list[b], cfg.d, derive_seed(s, b));
      for (Variant var : {Variant::free, Variant::bisection}) {
        const std::uint64_t cs = derive_seed(s, 100 + 2 * b + (var == Variant::free ? 0 : 1));
        row.push_back(observables({a, beta, var}, cfg, cs, true).phi);
      }
    }
    return row;
  });
  ResultTable fb({"n", "d", "beta", "draws", "method", "phi_free", "phi_free_se", "phi_bis",
                  "phi_bis_se", "gap", "gap_se", "step_decrease", "step_se"});
  std::vector<std::vector<double>> gaps(nn);
  for (std::size_t b = 0; b < nn; ++b) {
    gaps[b] = elementwise(column(rows, 2 * b), column(rows, 2 * b + 1), minus);
  }
  const auto steps = trend_steps(gaps);
  for (std::size_t b = 0; b < nn; ++b) {
    const Estimate f = iid_estimate(column(rows, 2 * b));
    const Estimate bis = iid_estimate(column(rows, 2 * b + 1));
    const Estimate g = iid_estimate(gaps[b]);
    fb.add_row({static_cast<long long>(cfg.n_list[b]), cfg.d, cfg.beta,
                static_cast<long long>(cfg.disorder_draws), method_for(cfg.n_list[b]), f.mean,
                f.std_error, bis.mean, bis.std_error, std::abs(g.mean), g.std_error,
                step_cell(steps, b, false), step_cell(steps, b, true)});
  }
  res.extra.emplace_back("free_vs_bis", std::move(fb));
  return res;
}

ExperimentResult run_magnetization_suppression(const ExperimentConfig& cfg) {
  cfg.validate();
  require_draws(cfg);
  const auto variants = cfg.variants();
  const std::size_t dn = cfg.d_list.size();
  const McmcParams params = cfg.mcmc();
  // Per draw: per variant, per d [m2, ess, nonstationary].
  const auto rows = quenched_rows(cfg.disorder_draws, cfg.seed, [&](std::uint64_t s) {
    std::vector<double> row;
    for (std::size_t a = 0; a < dn; ++a) {
      const SparseDisorder x = sample_sparse(cfg.n, cfg.d_list[a], derive_seed(s, a));
      for (std::size_t v = 0; v < variants.size(); ++v) {
        const GibbsSpec spec{x, cfg.beta / std::sqrt(cfg.d_list[a]), variants[v]};
        if (cfg.n <= kExperimentExactCap) {
          row.insert(row.end(), {gibbs_expectation(spec, Observable::magnetization_sq), 0.0, 0.0});
        } else {
          const McmcResult r = estimate(spec, McmcObservable::magnetization_sq, params,
                                        derive_seed(s, 100 + a * variants.size() + v));
          row.insert(row.end(), {r.estimate.mean, r.diagnostics.ess,
                                 r.diagnostics.nonstationary ? 1.0 : 0.0});
        }
      }
    }
    return row;
  });
  ExperimentResult res;
  res.table = ResultTable({"variant", "d", "n", "beta", "draws", "method", "m2", "m2_se",
                           "sqrt_d_m2", "sqrt_d_m2_se", "beta0_closed_form", "step_decrease",
                           "step_se", "mean_ess", "nonstationary_draws"});
  const double n = static_cast<double>(cfg.n);
  for (std::size_t v = 0; v < variants.size(); ++v) {
    auto idx = [&](std::size_t a, std::size_t f) { return (a * variants.size() + v) * 3 + f; };
    std::vector<std::vector<double>> scaled(dn);
    for (std::size_t a = 0; a < dn; ++a) {
      scaled[a] = column(rows, idx(a, 0));
      for (double& x : scaled[a]) x *= std::sqrt(cfg.d_list[a]);
    }
    const auto steps = trend_steps(scaled);
    for (std::size_t a = 0; a < dn; ++a) {
      const double rd = std::sqrt(cfg.d_list[a]);
      const Estimate m = iid_estimate(column(rows, idx(a, 0)));
      const Estimate sm = iid_estimate(scaled[a]);
      double closed = rd / n;
      if (variants[v] == Variant::bisection) closed = cfg.n % 2 == 0 ? 0.0 : rd / (n * n);
      res.table.add_row({to_string(variants[v]), cfg.d_list[a], static_cast<long long>(cfg.n),
                         cfg.beta, static_cast<long long>(cfg.disorder_draws), method_for(cfg.n),
                         m.mean, m.std_error, sm.mean, sm.std_error, closed,
                         step_cell(steps, a, false), step_cell(steps, a, true),
                         mean_of(column(rows, idx(a, 1))),
                         static_cast<long long>(count_flags(column(rows, idx(a, 2))))});
    }
  }
  return res;
}

ExperimentResult run_chaos(const ExperimentConfig& cfg) {
  cfg.validate();
  require_draws(cfg);
  const auto variants = cfg.variants();
  const McmcParams params = cfg.mcmc();
  ExperimentResult res;
  res.table = ResultTable({"model", "variant", "t", "n", "d", "beta", "draws", "method",
                           "overlap_sq", "overlap_sq_se", "beta0_null", "mean_ess",
                           "nonstationary_draws"});
  const double null_value = 1.0 / static_cast<double>(cfg.n);
  const std::size_t tn = cfg.t_list.size();
  for (Variant var : variants) {
    const std::string vname = to_string(var);
    if (cfg.n <= kExperimentExactCap) {
      // Same seeding as the MCMC curves; the inner average is exact.
      const std::size_t draws = cfg.disorder_draws;
      std::vector<double> sparse_vals(tn * draws), sk_vals(tn * draws);
      parallel_for(tn * draws, [&](std::size_t task) {
        const std::size_t a = task / draws;
        const std::size_t k = task % draws;
        const std::uint64_t ps = derive_seed(derive_seed(cfg.seed, a), k);
        const double t = cfg.t_list[a];
        const double b = cfg.beta / std::sqrt(cfg.d);
        const SparsePair pair = couple_sparse(cfg.n, cfg.d, t, ps);
        sparse_vals[task] = coupled_overlap_sq(gibbs_table({pair.first(), b, var}),
                                               gibbs_table({pair.second(), b, var}));
        const DenseDisorder g = sample_sk(cfg.n, derive_seed(ps, 0));
        const DenseDisorder gt = couple_sk(g, t, derive_seed(ps, 1));
        sk_vals[task] = coupled_overlap_sq(gibbs_table({g, cfg.beta, var}),
                                           gibbs_table({gt, cfg.beta, var}));
      });
      for (const char* model : {"sparse", "sk"}) {
        const auto& vals = std::string(model) == "sparse" ? sparse_vals : sk_vals;
        for (std::size_t a = 0; a < tn; ++a) {
          const std::vector<double> v(vals.begin() + static_cast<std::ptrdiff_t>(a * draws),
                                      vals.begin() + static_cast<std::ptrdiff_t>((a + 1) * draws));
          const Estimate e = iid_estimate(v);
          res.table.add_row({model, vname, cfg.t_list[a], static_cast<long long>(cfg.n), cfg.d,
                             cfg.beta, static_cast<long long>(draws), "exact", e.mean, e.std_error,
                             null_value, kNaN, 0LL});
        }
      }
      continue;
    }
    const auto sparse = chaos_curve(cfg.n, cfg.d, cfg.beta, cfg.t_list, params,
                                    cfg.disorder_draws, cfg.seed, var);
    const auto sk = chaos_curve_sk(cfg.n, cfg.beta, cfg.t_list, params, cfg.disorder_draws,
                                   derive_seed(cfg.seed, 0x5c), var);
    for (const auto* curve : {&sparse, &sk}) {
      const char* model = curve == &sparse ? "sparse" : "sk";
      for (const ChaosPoint& p : *curve) {
        res.table.add_row({model, vname, p.t, static_cast<long long>(cfg.n), cfg.d, cfg.beta,
                           static_cast<long long>(cfg.disorder_draws), "mcmc", p.overlap_sq.mean,
                           p.overlap_sq.std_error, null_value, p.mean_ess,
                           static_cast<long long>(p.nonstationary_draws)});
      }
    }
  }
  return res;
}

double null_overlap_tail(std::size_t n, double eps, Variant variant) {
  const OverlapSet s = OverlapSet::i_epsilon(eps);
  const long long nn = static_cast<long long>(n);
  auto log_choose = [](double a, double b) {
    return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
  };
  double tail = 0.0;
  if (variant == Variant::free) {
    for (long long h = 0; h <= nn; ++h) {
      if (s.contains(nn - 2 * h, n)) {
        tail += std::exp(log_choose(static_cast<double>(n), static_cast<double>(h)) -
                         static_cast<double>(n) * std::log(2.0));
      }
    }
    return tail;
  }
  if (n % 2 != 0) throw std::invalid_argument("null_overlap_tail: bisection needs even n");
  // Two uniform bisections disagree on 2j sites, j ~ hypergeometric(n, n/2, n/2).
  const double half = static_cast<double>(n / 2);
  const double total = log_choose(static_cast<double>(n), half);
  for (long long j = 0; 2 * j <= nn; ++j) {
    if (s.contains(nn - 4 * j, n)) {
      tail += std::exp(2.0 * log_choose(half, static_cast<double>(j)) - total);
    }
  }
  return tail;
}

ExperimentResult run_restricted_mass(const ExperimentConfig& cfg) {
  cfg.validate();
  require_draws(cfg);
  for (std::size_t m : cfg.n_list) {
    if (m > kCoupledCap) throw std::invalid_argument("restricted_mass: n exceeds the coupled cap");
  }
  const auto variants = cfg.variants();
  const std::size_t nn = cfg.n_list.size();
  const OverlapSet ieps = OverlapSet::i_epsilon(cfg.epsilon);
  const double sparse_beta = cfg.beta / std::sqrt(cfg.d);
  const std::size_t draws = cfg.disorder_draws;
  // Per (n index, draw): per variant [sk mass, sk log ratio, sparse mass, sparse log ratio].
  const std::size_t width = 4 * variants.size();
  std::vector<std::vector<double>> vals(nn * draws);
  parallel_for(nn * draws, [&](std::size_t task) {
    const std::size_t b = task / draws;
    const std::size_t k = task % draws;
    const std::size_t n = cfg.n_list[b];
    const std::uint64_t s = derive_seed(derive_seed(cfg.seed, b), k);
    const DenseDisorder g = sample_sk(n, derive_seed(s, 0));
    const DenseDisorder gt = couple_sk(g, cfg.t, derive_seed(s, 1));
    const SparsePair pair = couple_sparse(n, cfg.d, cfg.t, derive_seed(s, 2));
    std::vector<double> row;
    row.reserve(width);
    for (Variant var : variants) {
      const CoupledMass sk = coupled_mass({g, gt, cfg.beta, var, ieps});
      const CoupledMass sp = coupled_mass({pair.first(), pair.second(), sparse_beta, var, ieps});
      const double inv_n = 1.0 / static_cast<double>(n);
      row.insert(row.end(), {sk.mass, (sk.log_z_restricted - sk.log_z_full) * inv_n, sp.mass,
                             (sp.log_z_restricted - sp.log_z_full) * inv_n});
    }
    vals[task] = std::move(row);
  });

  ExperimentResult res;
  res.table = ResultTable({"row", "model", "variant", "n", "d", "beta", "t", "epsilon", "draws",
                           "mass", "mass_se", "log_ratio", "log_ratio_se", "step_decrease",
                           "step_se", "reference", "abs_error"});
  for (std::size_t v = 0; v < variants.size(); ++v) {
    for (std::size_t model = 0; model < 2; ++model) {
      std::vector<std::vector<double>> mass(nn), ratio(nn);
      for (std::size_t b = 0; b < nn; ++b) {
        for (std::size_t k = 0; k < draws; ++k) {
          const auto& row = vals[b * draws + k];
          mass[b].push_back(row[4 * v + 2 * model]);
          ratio[b].push_back(row[4 * v + 2 * model + 1]);
        }
      }
      // The log-ratio is a signed level, not a gap, so steps are plain
      // differences ratio(n_b) - ratio(n_{b+1}).
      std::vector<TrendStep> steps;
      for (std::size_t b = 0; b + 1 < nn; ++b) {
        const Estimate e = iid_estimate(elementwise(ratio[b], ratio[b + 1], minus));
        steps.push_back({e.mean, e.std_error});
      }
      for (std::size_t b = 0; b < nn; ++b) {
        const Estimate m = iid_estimate(mass[b]);
        const Estimate r = iid_estimate(ratio[b]);
        res.table.add_row({"restricted", model == 0 ? "sk" : "sparse", to_string(variants[v]),
                           static_cast<long long>(cfg.n_list[b]), cfg.d, cfg.beta, cfg.t,
                           cfg.epsilon, static_cast<long long>(draws), m.mean, m.std_error, r.mean,
                           r.std_error, step_cell(steps, b, false), step_cell(steps, b, true),
                           kNaN, kNaN});
      }
    }
  }

  // Sanity rows on the largest n: the full set has mass 1, and at beta = 0,
  // t = 1 the mass is the exact null tail of two independent uniform replicas.
  const std::size_t n = cfg.n_list.back();
  const std::uint64_t s = derive_seed(cfg.seed, 0xfull);
  const DenseDisorder g = sample_sk(n, derive_seed(s, 0));
  const DenseDisorder g1 = couple_sk(g, 1.0, derive_seed(s, 1));
  const SparsePair p1 = couple_sparse(n, cfg.d, 1.0, derive_seed(s, 2));
  for (Variant var : variants) {
    const double full_sk = coupled_mass({g, g1, cfg.beta, var, OverlapSet::full()}).mass;
    const double full_sp =
        coupled_mass({p1.first(), p1.second(), sparse_beta, var, OverlapSet::full()}).mass;
    for (std::size_t model = 0; model < 2; ++model) {
      const double m = model == 0 ? full_sk : full_sp;
      res.table.add_row({"full_set", model == 0 ? "sk" : "sparse", to_string(var),
                         static_cast<long long>(n), cfg.d, cfg.beta, 1.0, cfg.epsilon, 1LL, m, 0.0,
                         kNaN, kNaN, kNaN, kNaN, 1.0, std::abs(m - 1.0)});
    }
    if (var == Variant::bisection && n % 2 != 0) continue;
    const double ref = null_overlap_tail(n, cfg.epsilon, var);
    const double m_sk = coupled_mass({g, g1, 0.0, var, ieps}).mass;
    const double m_sp = coupled_mass({p1.first(), p1.second(), 0.0, var, ieps}).mass;
    for (std::size_t model = 0; model < 2; ++model) {
      const double m = model == 0 ? m_sk : m_sp;
      res.table.add_row({"beta0_t1", model == 0 ? "sk" : "sparse", to_string(var),
                         static_cast<long long>(n), cfg.d, 0.0, 1.0, cfg.epsilon, 1LL, m, 0.0,
                         std::log(m) / static_cast<double>(n), 0.0, kNaN, kNaN, ref,
                         std::abs(m - ref)});
    }
  }
  return res;
}

Estimate sk_overlap_energy_residual(std::size_t n, double beta, std::size_t draws,
                                    std::uint64_t seed) {
  if (draws < 2) throw std::invalid_argument("sk_overlap_energy_residual: need draws >= 2");
  const auto rows = quenched_rows(draws, seed, [&](std::uint64_t s) {
    const GibbsTable t = gibbs_table({sample_sk(n, s), beta, Variant::free});
    const double e = gibbs_expectation(t, Observable::energy) / static_cast<double>(n);
    const double r2 = two_replica_expectation(t, PairObservable::overlap_sq);
    return std::vector<double>{e + 0.5 * beta * (1.0 - r2)};
  });
  return iid_estimate(column(rows, 0), "quenched_exact");
}

std::vector<SparseOverlapEnergy> sparse_overlap_energy(std::size_t n,
                                                       const std::vector<double>& d_list,
                                                       double beta, std::size_t draws,
                                                       std::uint64_t seed) {
  if (draws < 2) throw std::invalid_argument("sparse_overlap_energy: need draws >= 2");
  const double nd = static_cast<double>(n);
  const auto rows = quenched_rows(draws, seed, [&](std::uint64_t s) {
    std::vector<double> row;
    for (std::size_t a = 0; a < d_list.size(); ++a) {
      const double rd = std::sqrt(d_list[a]);
      const double b = beta / rd;
      const GibbsTable t = gibbs_table({sample_sparse(n, d_list[a], derive_seed(s, a)), b,
                                        Variant::free});
      const double e = gibbs_expectation(t, Observable::energy);
      const double m2 = gibbs_expectation(t, Observable::magnetization_sq);
      const auto corr = pair_correlations(t);
      double r2 = 0.0;
      for (double c : corr) r2 += c * c;
      r2 /= nd * nd;
      const double tau = std::tanh(b);
      double stein = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) continue;
          const double c = corr[i * n + j];
          stein += (c - tau) / (1.0 - c * tau) - c;
        }
      }
      const double overlap_term = 0.5 * beta * (1.0 - r2);
      row.push_back(e / (rd * nd) - 0.5 * rd * m2 + overlap_term);
      row.push_back(rd / (2.0 * nd * nd) * stein + overlap_term);
    }
    return row;
  });
  std::vector<SparseOverlapEnergy> out;
  for (std::size_t a = 0; a < d_list.size(); ++a) {
    const auto direct = column(rows, 2 * a);
    const auto rewritten = column(rows, 2 * a + 1);
    SparseOverlapEnergy r;
    r.d = d_list[a];
    r.direct = iid_estimate(direct, "quenched_exact");
    r.rewritten = iid_estimate(rewritten, "quenched_exact");
    r.difference_se = iid_estimate(elementwise(direct, rewritten, minus)).std_error;
    out.push_back(r);
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const std::string& e = cfg.experiment;
  if (e == "energy_correspondence") return run_energy_correspondence(cfg);
  if (e == "overlap_correspondence") return run_overlap_correspondence(cfg);
  if (e == "chaos") return run_chaos(cfg);
  if (e == "restricted_mass") return run_restricted_mass(cfg);
  if (e == "interp_free_energy") return run_interp_free_energy(cfg);
  if (e == "magnetization_suppression") return run_magnetization_suppression(cfg);
  if (e == "identity_suite") return run_identity_suite(cfg);
  throw std::invalid_argument("unknown experiment '" + e + "'");
}

}  // namespace spinlab
