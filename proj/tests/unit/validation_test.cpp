#include <gtest/gtest.h>

#include <cmath>

#include "tamed/validation.hpp"

using namespace tamed;

TEST(Monotonicity, LinearDissipative) {
  const auto m = builtin_linear_oracle(-1.0, {0.0});
  const auto rep = validate_monotonicity(m, 3.0, 500, 5.0, 1);
  EXPECT_LE(rep.monotone_L, -2.0 + 1e-12);
  EXPECT_GE(rep.monotone_L, -2.0 - 1e-12);
  EXPECT_TRUE(rep.passed());
}

TEST(Monotonicity, QuinticFiniteAtRadiusFive) {
  const auto m = builtin_quintic_multiplicative();
  const auto rep = validate_monotonicity(m, 3.0, 5000, 5.0, 2);
  EXPECT_TRUE(std::isfinite(rep.monotone_L));
  EXPECT_TRUE(std::isfinite(rep.growth_L));
  ASSERT_TRUE(rep.monotone_pass.has_value());
  EXPECT_TRUE(*rep.monotone_pass);
  EXPECT_TRUE(rep.passed());
  EXPECT_LE(rep.monotone_L, 3.6);
  EXPECT_GT(rep.monotone_L, 3.0);
}

TEST(Monotonicity, ConstantsIgnoredAboveTheirP0) {
  const auto m = builtin_quintic_multiplicative();
  const auto rep = validate_monotonicity(m, 5.0, 200, 2.0, 2);
  EXPECT_FALSE(rep.monotone_pass.has_value());
}

TEST(Monotonicity, DegeneratePairPasses) {
  const auto m = builtin_quintic_multiplicative();
  const std::vector<double> x{1.3};
  EXPECT_FALSE(monotonicity_quotient(m, 3.0, x, x).has_value());
  const std::vector<double> y{0.4};
  EXPECT_TRUE(monotonicity_quotient(m, 3.0, x, y).has_value());
}

TEST(Monotonicity, QuotientByHand) {
  // x = 1, y = 0: 2 (x - y)(f(x) - f(y)) = -2 and the constant noise drops out.
  const auto m = builtin_cubic_additive(2.0);
  const std::vector<double> x{1.0}, y{0.0};
  EXPECT_DOUBLE_EQ(*monotonicity_quotient(m, 3.0, x, y), -2.0);
}

TEST(Monotonicity, RejectsBadArguments) {
  const auto m = builtin_quintic_multiplicative();
  EXPECT_THROW(validate_monotonicity(m, 2.0, 10, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(validate_monotonicity(m, 3.0, 0, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(validate_monotonicity(m, 3.0, 10, 0.0, 0), std::invalid_argument);
}

TEST(Monotonicity, DeterministicInSeed) {
  const auto m = builtin_quintic_multiplicative();
  const auto a = validate_monotonicity(m, 3.0, 300, 5.0, 9);
  const auto b = validate_monotonicity(m, 3.0, 300, 5.0, 9);
  EXPECT_EQ(a.monotone_L, b.monotone_L);
  EXPECT_EQ(a.growth_L, b.growth_L);
}

TEST(SampleBall, StaysInside) {
  PhiloxStream rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto p = sample_ball(rng, 3, 2.0);
    EXPECT_LE(std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]), 2.0);
  }
}
