#include "tamed/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace tamed {

RegressionResult linregress(std::span<const std::pair<double, double>> points) {
  const std::size_t n = points.size();
  if (n < 2) throw std::invalid_argument("linregress: need at least two points");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linregress: all x values are equal");

  RegressionResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ss_res = 0.0;
  for (const auto& [x, y] : points) {
    const double e = y - (r.slope * x + r.intercept);
    ss_res += e * e;
  }
  r.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  r.points.assign(points.begin(), points.end());
  return r;
}

KsResult two_sample_ks(std::span<const double> a, std::span<const double> b, double threshold) {
  if (a.empty() || b.empty()) throw std::invalid_argument("two_sample_ks: empty sample");
  auto has_nan = [](std::span<const double> s) {
    return std::any_of(s.begin(), s.end(), [](double v) { return std::isnan(v); });
  };
  if (has_nan(a) || has_nan(b)) throw std::invalid_argument("two_sample_ks: NaN in sample");

  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());

  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }

  KsResult r;
  r.statistic = d;
  r.n_a = sa.size();
  r.n_b = sb.size();
  r.threshold = threshold;
  r.rejected = d > threshold;
  return r;
}

double ks_critical_value(double level, std::size_t n_a, std::size_t n_b) {
  const double na = static_cast<double>(n_a), nb = static_cast<double>(n_b);
  return std::sqrt(-0.5 * std::log(level / 2.0)) * std::sqrt((na + nb) / (na * nb));
}

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

MeanCi mc_mean_ci(std::span<const double> samples, double level) {
  if (samples.size() < 2) throw std::invalid_argument("mc_mean_ci: need at least two samples");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("mc_mean_ci: level outside (0, 1)");
  const auto m = sample_moments(samples);
  return {m.mean, normal_quantile(0.5 + 0.5 * level) * m.mean_se};
}

SampleMoments sample_moments(std::span<const double> samples) {
  SampleMoments m;
  m.n = samples.size();
  if (m.n == 0) return m;
  const double n = static_cast<double>(m.n);
  double sum = 0.0;
  for (double v : samples) sum += v;
  m.mean = sum / n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : samples) {
    const double c = v - m.mean;
    m2 += c * c;
    m4 += c * c * c * c;
  }
  if (m.n < 2) return m;
  m.variance = m2 / (n - 1.0);
  m.mean_se = std::sqrt(m.variance / n);
  // Var(s^2) ~ (mu4 - sigma^4) / n.
  const double mu4 = m4 / n;
  const double sigma2 = m2 / n;
  m.variance_se = std::sqrt(std::max(0.0, mu4 - sigma2 * sigma2) / n);
  return m;
}

}  // namespace tamed
