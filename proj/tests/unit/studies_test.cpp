#include <gtest/gtest.h>

#include <cmath>

#include "tamed/studies.hpp"

using namespace tamed;

namespace {

StudySetup small(std::size_t paths = 200) {
  StudySetup s;
  s.paths = paths;
  s.master_seed = 5;
  return s;
}

}  // namespace

TEST(Studies, NormalizationRate) {
  EXPECT_EQ(normalization_rate(SchemeVariant::MultiplicativeTamed, 0.3), 0.3);
  EXPECT_EQ(normalization_rate(SchemeVariant::MultiplicativeTamed, 0.8), 0.5);
  EXPECT_EQ(normalization_rate(SchemeVariant::AdditiveTamed, 0.7), 0.7);
  EXPECT_EQ(normalization_rate(SchemeVariant::AdditiveTamed, 2.5), 1.0);
  EXPECT_THROW(normalization_rate(SchemeVariant::StandardEuler, 1.0), std::invalid_argument);
}

TEST(Studies, CouplingGivesZeroErrorAgainstItself) {
  const auto q = builtin_quintic_multiplicative();
  auto s = small(20);
  s.alpha_ref = 0.4;
  const auto e = compute_error_ensembles(q, SchemeVariant::MultiplicativeTamed, {0.4}, {256}, 256, s);
  for (double v : e[0].errors[0]) EXPECT_EQ(v, 0.0);
}

TEST(Studies, LinearOracleOrderHalfWithNoise) {
  const auto m = builtin_linear_oracle(-1.0, {0.5});
  const auto r = strong_order_study(m, SchemeVariant::MultiplicativeTamed, 1.0, {16, 32, 64, 128, 256}, 4096, small());
  EXPECT_NEAR(r.regression.slope, 0.5, 0.1);
  EXPECT_EQ(r.points.size(), 5u);
  EXPECT_EQ(r.paths_used, 200u);
}

TEST(Studies, LinearOracleOrderOneWithoutNoise) {
  const auto m = builtin_linear_oracle(-1.0, {0.0});
  const auto r = strong_order_study(m, SchemeVariant::MultiplicativeTamed, 1.0, {16, 32, 64, 128, 256}, 4096, small(20));
  EXPECT_NEAR(r.regression.slope, 1.0, 0.1);
}

TEST(Studies, CubicAdditiveOrderOne) {
  const auto c = builtin_cubic_additive(1.0);
  const auto r = strong_order_study(c, SchemeVariant::AdditiveTamed, 1.5, {64, 128, 256, 512, 1024}, 16384, small());
  EXPECT_NEAR(r.regression.slope, 1.0, 0.1);
}

TEST(Studies, RegressionUsesLogTwoRmse) {
  const auto c = builtin_cubic_additive(1.0);
  const auto r = strong_order_study(c, SchemeVariant::AdditiveTamed, 1.0, {16, 64}, 256, small(30));
  ASSERT_EQ(r.regression.points.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_DOUBLE_EQ(r.regression.points[i].first, std::log2(r.points[i].h));
    EXPECT_DOUBLE_EQ(r.regression.points[i].second, std::log2(r.points[i].rmse));
    EXPECT_DOUBLE_EQ(r.points[i].rmse * r.points[i].rmse, r.points[i].mse);
  }
}

TEST(Studies, Preconditions) {
  const auto q = builtin_quintic_multiplicative();
  EXPECT_THROW(strong_order_study(q, SchemeVariant::MultiplicativeTamed, 1.0, {48}, 1024, small()),
               std::invalid_argument);
  EXPECT_THROW(strong_order_study(q, SchemeVariant::MultiplicativeTamed, 1.0, {16, 32}, 1024, small(1)),
               std::invalid_argument);
  DistributionSetup ds;
  ds.base = small(50);
  EXPECT_THROW(error_distribution_study(q, SchemeVariant::MultiplicativeTamed, 1.0, 64, ds),
               std::invalid_argument);
  auto s = small(10);
  s.horizon = 1.0;
  EXPECT_THROW(error_evolution_study(q, SchemeVariant::MultiplicativeTamed, {1.0}, 0.3, 0.01, s),
               std::invalid_argument);
  EXPECT_THROW(error_evolution_study(q, SchemeVariant::MultiplicativeTamed, {1.0}, 0.1, 0.03, s),
               std::invalid_argument);
}

TEST(Studies, DivergenceAborts) {
  const auto q = builtin_quintic_multiplicative();
  auto s = small(20);
  s.x0 = {40.0};
  try {
    strong_order_study(q, SchemeVariant::StandardEuler, 1.0, {16, 32}, 256, s);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.total(), 20u);
    EXPECT_GT(e.diverged(), 0u);
  }
  // Statistics need two survivors whatever the tolerated fraction.
  s.max_divergence_fraction = 1.0;
  EXPECT_THROW(strong_order_study(q, SchemeVariant::StandardEuler, 1.0, {16, 32}, 256, s), DivergenceError);
  s.x0 = {1.0};
  const auto r = strong_order_study(q, SchemeVariant::StandardEuler, 1.0, {16, 32}, 256, s);
  EXPECT_EQ(r.diverged + r.paths_used, 20u);
}

TEST(Evolution, StartsAtZero) {
  const auto q = builtin_quintic_multiplicative();
  auto s = small(30);
  const auto ev = error_evolution_study(q, SchemeVariant::MultiplicativeTamed, {0.5, 1.0}, 0.1, 0.01, s);
  EXPECT_EQ(ev.coarse_steps, 10u);
  EXPECT_EQ(ev.ref_factor, 10u);
  EXPECT_EQ(ev.rows.size(), 22u);
  for (std::size_t a = 0; a < 2; ++a) {
    EXPECT_EQ(ev.at(a, 0).t, 0.0);
    EXPECT_EQ(ev.at(a, 0).mse, 0.0);
    EXPECT_NEAR(ev.at(a, 10).t, 1.0, 1e-15);
    EXPECT_GT(ev.at(a, 10).mse, 0.0);
  }
}

TEST(Evolution, TerminalMatchesOrderStudy) {
  const auto c = builtin_cubic_additive(1.0);
  auto s = small(40);
  const auto ev = error_evolution_study(c, SchemeVariant::AdditiveTamed, {1.5}, 1.0 / 16, 1.0 / 256, s);
  const auto st = strong_order_study(c, SchemeVariant::AdditiveTamed, 1.5, {16, 32}, 256, s);
  EXPECT_NEAR(ev.at(0, 16).mse, st.points[0].mse, 1e-12 * st.points[0].mse);
}

TEST(Distribution, ZeroModelIsDegenerate) {
  const auto z = builtin_linear_oracle(0.0, {0.0});
  DistributionSetup ds;
  ds.base = small(100);
  ds.limit_paths = 100;
  ds.ref_steps = 256;
  ds.limit_fine_steps = 64;
  const auto r = error_distribution_study(z, SchemeVariant::MultiplicativeTamed, 1.0, 32, ds);
  ASSERT_EQ(r.coordinates.size(), 1u);
  EXPECT_EQ(r.coordinates[0].ks.statistic, 0.0);
  EXPECT_EQ(r.coordinates[0].a.variance, 0.0);
  EXPECT_FALSE(r.rejected());
}

TEST(Distribution, RateFollowsVariant) {
  const auto c = builtin_cubic_additive(1.0);
  DistributionSetup ds;
  ds.base = small(100);
  ds.limit_paths = 100;
  ds.ref_steps = 1024;
  ds.limit_fine_steps = 256;
  const auto r = error_distribution_study(c, SchemeVariant::AdditiveTamed, 1.5, 64, ds);
  EXPECT_EQ(r.rate, 1.0);
  EXPECT_EQ(r.sample_a[0].size(), 100u);
  EXPECT_EQ(r.sample_b[0].size(), 100u);
  const auto q = builtin_quintic_multiplicative();
  const auto rq = error_distribution_study(q, SchemeVariant::MultiplicativeTamed, 0.4, 64, ds);
  EXPECT_EQ(rq.rate, 0.4);
}
