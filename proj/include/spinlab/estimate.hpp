#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace spinlab {

/// A stochastic result with its uncertainty.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  /// Number of samples, or the effective sample size for correlated series.
  std::size_t count = 1;
  std::string method;
};

/// Sample mean with the iid standard error s / sqrt(N). Requires N >= 1;
/// a single sample gets std_error 0.
Estimate iid_estimate(std::span<const double> samples, std::string method = "iid");

/// Exact value wrapped as an estimate with zero error.
Estimate exact_estimate(double value, std::string method = "exact");

/// Diagnostics attached to a batch-means estimate of a correlated series.
struct SeriesDiagnostics {
  std::size_t batches = 0;
  std::size_t batch_size = 0;
  double ess = 0.0;
  /// Mean of the first 10% minus mean of the last 50%, in combined SE units.
  double geweke_z = 0.0;
  bool nonstationary = false;  ///< |geweke_z| > 3
};

constexpr std::size_t kDefaultBatches = 32;
constexpr std::size_t kMinBatches = 20;

/// Batch-means estimate of the mean of a stationary series. Uses
/// min(batches, N) equal batches; leading samples that do not fill a batch
/// are dropped. Throws std::invalid_argument if fewer than 20 batches fit.
Estimate batch_means(std::span<const double> series, std::size_t batches = kDefaultBatches,
                     SeriesDiagnostics* diagnostics = nullptr);

double geweke_z(std::span<const double> series);

/// a - b for independent estimates.
Estimate difference(const Estimate& a, const Estimate& b);
/// sqrt(se_a^2 + se_b^2).
double combined_se(const Estimate& a, const Estimate& b);

}  // namespace spinlab
