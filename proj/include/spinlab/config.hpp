#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "spinlab/exact.hpp"
#include "spinlab/mcmc.hpp"

namespace spinlab {

/// Parameters of one experiment run. `beta` is always the unscaled inverse
/// temperature; sparse runs use beta / sqrt(d).
struct ExperimentConfig {
  std::string experiment;
  std::size_t n = 12;
  std::vector<std::size_t> n_list = {6, 8, 10, 12};
  double d = 16.0;
  std::vector<double> d_list = {4.0, 16.0, 64.0};
  double beta = 1.0;
  std::vector<double> beta_list = {0.5, 1.2};
  double t = 0.3;
  std::vector<double> t_list = {0.0, 0.05, 0.2, 0.5, 1.0};
  /// "free", "bisection" or "both".
  std::string variant = "free";
  std::size_t disorder_draws = 200;
  std::size_t sweeps = 100000;
  /// 0 selects the default of 10% of sweeps.
  std::size_t burn_in = 0;
  std::size_t batches = 32;
  std::size_t grid_points = 21;
  std::uint64_t seed = 1;
  double epsilon = 0.3;
  std::string output_path;

  McmcParams mcmc() const;
  std::vector<Variant> variants() const;
  /// Throws std::invalid_argument on any violated field constraint.
  void validate() const;
};

/// Names of all runnable experiments.
const std::vector<std::string>& experiment_names();

/// Defaults for a named experiment.
ExperimentConfig default_config(const std::string& experiment);

/// Sets one field from its text form; throws std::invalid_argument on an
/// unknown key or malformed value. Lists are comma-separated.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Flat `key = value` lines; blank lines and text after '#' are ignored.
void apply_config_text(ExperimentConfig& cfg, std::istream& in);
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

/// Every field, one `key = value` line each, in fixed order. Round-trips
/// through apply_config_text.
std::string canonical_text(const ExperimentConfig& cfg);
/// FNV-1a 64 of canonical_text without output_path, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// Keys accepted by apply_setting, in canonical order.
const std::vector<std::string>& config_keys();

}  // namespace spinlab
