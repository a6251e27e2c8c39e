#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace tamed {

/// Ensembles smaller than this get their confidence bands flagged.
inline constexpr std::size_t kMinReliableSamples = 30;

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;
};

/// Ordinary least squares y = slope x + intercept. Throws
/// std::invalid_argument for fewer than two distinct x values.
RegressionResult linregress(std::span<const std::pair<double, double>> points);

struct KsResult {
  double statistic = 0.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double threshold = 0.0;
  /// statistic > threshold.
  bool rejected = false;
};

/// Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)| by a merge
/// scan of the sorted samples. Throws std::invalid_argument on empty input
/// or NaN entries.
KsResult two_sample_ks(std::span<const double> a, std::span<const double> b,
                       double threshold = 1.0);

/// Asymptotic critical value c(level) sqrt((n_a + n_b) / (n_a n_b)) with
/// c(level) = sqrt(-ln(level / 2) / 2).
double ks_critical_value(double level, std::size_t n_a, std::size_t n_b);

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;
};

/// Sample mean and normal-approximation half width z_{(1+level)/2} s / sqrt(n).
MeanCi mc_mean_ci(std::span<const double> samples, double level);

/// Standard normal quantile.
double normal_quantile(double p);

struct SampleMoments {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  /// CLT standard errors of the sample mean and sample variance.
  double mean_se = 0.0;
  double variance_se = 0.0;
};

SampleMoments sample_moments(std::span<const double> samples);

}  // namespace tamed
