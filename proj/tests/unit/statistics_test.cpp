#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "tamed/philox.hpp"
#include "tamed/statistics.hpp"

using namespace tamed;

TEST(Linregress, ExactLine) {
  std::vector<std::pair<double, double>> pts;
  for (double x : {-2.0, 0.0, 1.0, 3.5}) pts.emplace_back(x, 2 * x + 1);
  const auto r = linregress(pts);
  EXPECT_NEAR(r.slope, 2.0, 1e-14);
  EXPECT_NEAR(r.intercept, 1.0, 1e-14);
  EXPECT_NEAR(r.r_squared, 1.0, 1e-14);
  EXPECT_EQ(r.points.size(), 4u);
}

TEST(Linregress, TwoPoints) {
  const std::vector<std::pair<double, double>> pts{{0, 0}, {1, 3}};
  EXPECT_DOUBLE_EQ(linregress(pts).slope, 3.0);
}

TEST(Linregress, SymmetricResiduals) {
  const std::vector<std::pair<double, double>> pts{{0, 1}, {1, -1}, {2, -1}, {3, 1}};
  EXPECT_NEAR(linregress(pts).slope, 0.0, 1e-15);
}

TEST(Linregress, Rejections) {
  const std::vector<std::pair<double, double>> same{{1, 0}, {1, 3}};
  EXPECT_THROW(linregress(same), std::invalid_argument);
  const std::vector<std::pair<double, double>> one{{1, 0}};
  EXPECT_THROW(linregress(one), std::invalid_argument);
}

TEST(Linregress, SlopeInvariantUnderRescaledH) {
  std::vector<std::pair<double, double>> a, b;
  PhiloxStream rng(4);
  for (int k = 6; k <= 10; ++k) {
    const double h = std::pow(2.0, -k);
    const double e = std::log2(0.3 * std::pow(h, 0.7) * (1 + 0.1 * rng.normal()));
    a.emplace_back(std::log2(h), e);
    b.emplace_back(std::log2(5.0 * h), e);
  }
  const auto ra = linregress(a), rb = linregress(b);
  EXPECT_NEAR(ra.slope, rb.slope, 1e-12);
  EXPECT_NE(ra.intercept, rb.intercept);
}

TEST(Ks, Examples) {
  const std::vector<double> a{1, 2, 3, 4};
  EXPECT_EQ(two_sample_ks(a, a).statistic, 0.0);
  EXPECT_EQ(two_sample_ks(std::vector<double>{0}, std::vector<double>{1}).statistic, 1.0);
  const std::vector<double> b{11, 12, 13, 14};
  EXPECT_EQ(two_sample_ks(a, b).statistic, 1.0);
}

TEST(Ks, HandlesTies) {
  const std::vector<double> a{0, 0, 1, 1};
  const std::vector<double> b{0, 1, 1, 1};
  EXPECT_DOUBLE_EQ(two_sample_ks(a, b).statistic, 0.25);
  const std::vector<double> c{1, 1, 1};
  const std::vector<double> d{1};
  EXPECT_EQ(two_sample_ks(c, d).statistic, 0.0);
}

TEST(Ks, ByBruteForce) {
  PhiloxStream rng(10);
  std::vector<double> a(137), b(91);
  for (auto& v : a) v = std::round(rng.normal() * 4) / 4;
  for (auto& v : b) v = std::round((rng.normal() + 0.3) * 4) / 4;
  double brute = 0.0;
  auto ecdf = [](const std::vector<double>& s, double x) {
    return static_cast<double>(std::count_if(s.begin(), s.end(), [&](double v) { return v <= x; })) /
           static_cast<double>(s.size());
  };
  for (const auto* s : {&a, &b})
    for (double x : *s) brute = std::max(brute, std::abs(ecdf(a, x) - ecdf(b, x)));
  EXPECT_NEAR(two_sample_ks(a, b).statistic, brute, 1e-15);
}

TEST(Ks, SymmetricAndTransformInvariant) {
  PhiloxStream rng(12);
  std::vector<double> a(300), b(250);
  for (auto& v : a) v = rng.normal();
  for (auto& v : b) v = 1.2 * rng.normal() + 0.1;
  const double d = two_sample_ks(a, b).statistic;
  EXPECT_EQ(d, two_sample_ks(b, a).statistic);
  auto ta = a, tb = b;
  for (auto& v : ta) v = std::exp(v) + v * v * v;
  for (auto& v : tb) v = std::exp(v) + v * v * v;
  EXPECT_EQ(d, two_sample_ks(ta, tb).statistic);
}

TEST(Ks, Threshold) {
  const std::vector<double> a{0, 1, 2}, b{0.5, 1.5, 2.5};
  const auto r = two_sample_ks(a, b, 0.2);
  EXPECT_EQ(r.n_a, 3u);
  EXPECT_EQ(r.n_b, 3u);
  EXPECT_TRUE(r.rejected);
  EXPECT_FALSE(two_sample_ks(a, b, 0.5).rejected);
}

TEST(Ks, Rejections) {
  const std::vector<double> empty, one{1.0}, nan{std::numeric_limits<double>::quiet_NaN()};
  EXPECT_THROW(two_sample_ks(empty, one), std::invalid_argument);
  EXPECT_THROW(two_sample_ks(one, nan), std::invalid_argument);
}

TEST(Ks, CriticalValue) {
  // c(0.05) = 1.358...
  EXPECT_NEAR(ks_critical_value(0.05, 1000, 1000), 1.3581 * std::sqrt(2.0 / 1000), 1e-4);
}

TEST(MeanCi, Examples) {
  const std::vector<double> c{2.5, 2.5, 2.5};
  EXPECT_EQ(mc_mean_ci(c, 0.95).half_width, 0.0);
  const std::vector<double> s{0.0, 2.0};
  const auto r = mc_mean_ci(s, 0.95);
  EXPECT_DOUBLE_EQ(r.mean, 1.0);
  EXPECT_NEAR(r.half_width, 1.959963984540054, 1e-12);
  EXPECT_LT(mc_mean_ci(s, 1e-9).half_width, 1e-8);
}

TEST(NormalQuantile, Values) {
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-14);
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-15);
}

TEST(SampleMoments, Values) {
  const std::vector<double> s{1, 2, 3, 4};
  const auto m = sample_moments(s);
  EXPECT_EQ(m.n, 4u);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_DOUBLE_EQ(m.variance, 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.mean_se, std::sqrt(5.0 / 3.0 / 4.0));
  EXPECT_GT(m.variance_se, 0.0);
}

TEST(SampleMoments, VarianceStandardErrorForNormal) {
  // For normal data SE(s^2) -> sigma^2 sqrt(2 / n).
  PhiloxStream rng(1);
  std::vector<double> s(200000);
  for (auto& v : s) v = 2.0 * rng.normal();
  const auto m = sample_moments(s);
  EXPECT_NEAR(m.variance_se, 4.0 * std::sqrt(2.0 / 200000), 0.02 * 4.0 * std::sqrt(2.0 / 200000));
}
