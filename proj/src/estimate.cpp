#include "spinlab/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinlab {

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // unbiased
};

Moments moments(std::span<const double> x) {
  Moments m;
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) {
    m.mean = x[0];
    return m;
  }
  const auto n = static_cast<double>(x.size());
  for (double v : x) m.mean += v;
  m.mean /= n;
  if (x.size() > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - m.mean) * (v - m.mean);
    m.var = ss / (n - 1.0);
  }
  return m;
}

// Standard error of a segment mean, batching when the segment is long enough.
double segment_se(std::span<const double> x) {
  if (x.size() >= 4 * kMinBatches) {
    const std::size_t b = 10;
    const std::size_t size = x.size() / b;
    std::vector<double> means(b);
    for (std::size_t k = 0; k < b; ++k) {
      means[k] = moments(x.subspan(x.size() - (b - k) * size, size)).mean;
    }
    return std::sqrt(moments(means).var / static_cast<double>(b));
  }
  return std::sqrt(moments(x).var / static_cast<double>(x.size()));
}

}  // namespace

Estimate iid_estimate(std::span<const double> samples, std::string method) {
  if (samples.empty()) throw std::invalid_argument("iid_estimate: no samples");
  const Moments m = moments(samples);
  return {m.mean, std::sqrt(m.var / static_cast<double>(samples.size())), samples.size(),
          std::move(method)};
}

Estimate exact_estimate(double value, std::string method) {
  return {value, 0.0, 1, std::move(method)};
}

Estimate batch_means(std::span<const double> series, std::size_t batches,
                     SeriesDiagnostics* diagnostics) {
  const std::size_t n = series.size();
  const std::size_t b = std::min(batches, n);
  if (b < kMinBatches) {
    throw std::invalid_argument("batch_means: need at least " + std::to_string(kMinBatches) +
                                " post-burn-in samples, got " + std::to_string(n));
  }
  const std::size_t size = n / b;
  const auto used = series.subspan(n - b * size);
  std::vector<double> means(b);
  for (std::size_t k = 0; k < b; ++k) means[k] = moments(used.subspan(k * size, size)).mean;
  const Moments bm = moments(means);
  const Moments all = moments(used);
  const double se = std::sqrt(bm.var / static_cast<double>(b));

  double ess = static_cast<double>(used.size());
  if (bm.var > 0.0) ess = std::min(ess, all.var / (bm.var * static_cast<double>(size)) * ess);
  ess = std::max(ess, 1.0);

  if (diagnostics) {
    diagnostics->batches = b;
    diagnostics->batch_size = size;
    diagnostics->ess = ess;
    diagnostics->geweke_z = geweke_z(series);
    diagnostics->nonstationary = std::abs(diagnostics->geweke_z) > 3.0;
  }
  return {bm.mean, se, static_cast<std::size_t>(ess), "batch_means"};
}

double geweke_z(std::span<const double> series) {
  const std::size_t n = series.size();
  const std::size_t na = n / 10;
  const std::size_t nb = n / 2;
  if (na < 2 || nb < 2) return 0.0;
  const auto a = series.first(na);
  const auto b = series.last(nb);
  const double diff = moments(a).mean - moments(b).mean;
  const double se = std::hypot(segment_se(a), segment_se(b));
  if (se == 0.0) return diff == 0.0 ? 0.0 : (diff > 0 ? INFINITY : -INFINITY);
  return diff / se;
}

Estimate difference(const Estimate& a, const Estimate& b) {
  return {a.mean - b.mean, combined_se(a, b), std::min(a.count, b.count), "difference"};
}

double combined_se(const Estimate& a, const Estimate& b) {
  return std::hypot(a.std_error, b.std_error);
}

}  // namespace spinlab
