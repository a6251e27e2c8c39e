#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "tamed/noise.hpp"
#include "tamed/philox.hpp"

using namespace tamed;

TEST(TimeGrid, TimesAreIndexTimesStep) {
  TimeGrid g(1.0, 10);
  EXPECT_DOUBLE_EQ(g.step(), 0.1);
  EXPECT_EQ(g.time(3), 3 * 0.1);
  EXPECT_EQ(g.time(10), 1.0);
}

TEST(TimeGrid, KappaBracketsTime) {
  TimeGrid g(5.0, 500);
  for (int i = 0; i < 5000; ++i) {
    const double s = 5.0 * i / 5000.0 + 1e-4;
    if (s >= 5.0) break;
    const double k = g.kappa(s);
    EXPECT_LE(k, s);
    EXPECT_LT(s, k + g.step() + 1e-15);
  }
  EXPECT_EQ(g.kappa(5.0), 5.0);
  EXPECT_EQ(g.kappa_index(0.3), 30u);
}

TEST(TimeGrid, Refinement) {
  EXPECT_TRUE(TimeGrid(1.0, 64).is_refined_by(TimeGrid(1.0, 1024)));
  EXPECT_FALSE(TimeGrid(1.0, 64).is_refined_by(TimeGrid(1.0, 1000)));
  EXPECT_FALSE(TimeGrid(1.0, 64).is_refined_by(TimeGrid(2.0, 1024)));
}

TEST(GeneratePath, IncrementVariance) {
  const TimeGrid g(1.0, 4);
  double sum2 = 0.0;
  std::size_t n = 0;
  for (std::uint64_t seed = 0; n < 1000000; ++seed) {
    const auto p = generate_path(g, 1, seed);
    for (double v : p.increments()) sum2 += v * v, ++n;
  }
  EXPECT_NEAR(sum2 / n, 0.25, 0.0025);
}

TEST(GeneratePath, SameSeedSameIncrements) {
  const TimeGrid g(1.0, 128);
  const auto a = generate_path(g, 3, 77);
  const auto b = generate_path(g, 3, 77);
  ASSERT_EQ(a.increments().size(), 384u);
  EXPECT_TRUE(std::equal(a.increments().begin(), a.increments().end(), b.increments().begin()));
}

TEST(GeneratePath, DifferentSeedsUncorrelated) {
  const TimeGrid g(1.0, 1 << 20);
  const auto a = generate_path(g, 1, 1);
  const auto b = generate_path(g, 1, 2);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.increments().size(); ++i) {
    sab += a.increments()[i] * b.increments()[i];
    saa += a.increments()[i] * a.increments()[i];
    sbb += b.increments()[i] * b.increments()[i];
  }
  EXPECT_NEAR(sab / std::sqrt(saa * sbb), 0.0, 0.01);
}

TEST(GeneratePath, MomentTestForNormality) {
  // Jarque-Bera on 10^6 pooled increments; chi^2_2 critical value at 1e-3 is 13.8155.
  const TimeGrid g(1.0, 1000);
  std::vector<double> z;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto p = generate_driving_path(g, 1, 11, seed);
    for (double v : p.increments()) z.push_back(v / std::sqrt(g.step()));
  }
  const double n = static_cast<double>(z.size());
  const double mean = std::accumulate(z.begin(), z.end(), 0.0) / n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : z) {
    const double d = v - mean;
    m2 += d * d, m3 += d * d * d, m4 += d * d * d * d;
  }
  m2 /= n, m3 /= n, m4 /= n;
  const double skew = m3 / std::pow(m2, 1.5);
  const double kurt = m4 / (m2 * m2);
  const double jb = n / 6.0 * (skew * skew + (kurt - 3.0) * (kurt - 3.0) / 4.0);
  EXPECT_LT(jb, 13.8155);
}

TEST(GeneratePath, RejectsZeroDim) {
  EXPECT_THROW(generate_path(TimeGrid(1.0, 4), 0, 1), std::invalid_argument);
}

TEST(Coarsen, FactorOneIsIdentity) {
  const auto p = generate_path(TimeGrid(1.0, 16), 2, 3);
  const auto c = coarsen(p, 1);
  EXPECT_EQ(c.grid(), p.grid());
  EXPECT_TRUE(std::equal(p.increments().begin(), p.increments().end(), c.increments().begin()));
}

TEST(Coarsen, BlockSums) {
  const BrownianPath p(TimeGrid(1.0, 4), 1, 0, {0.1, -0.2, 0.3, 0.4});
  const auto c = coarsen(p, 2);
  ASSERT_EQ(c.grid().steps(), 2u);
  EXPECT_DOUBLE_EQ(c.increment(0)[0], -0.1);
  EXPECT_DOUBLE_EQ(c.increment(1)[0], 0.7);
  EXPECT_EQ(c.grid().horizon(), 1.0);
}

TEST(Coarsen, RejectsNonDivisibleFactor) {
  const auto p = generate_path(TimeGrid(1.0, 12), 1, 3);
  EXPECT_THROW(coarsen(p, 5), std::invalid_argument);
  EXPECT_THROW(coarsen(p, 0), std::invalid_argument);
}

TEST(Coarsen, TotalsMatchWhenSummedInBlockOrder) {
  const auto fine = generate_path(TimeGrid(1.0, 1024), 2, 9);
  const auto coarse = coarsen(fine, 16);
  for (std::size_t k = 0; k < 2; ++k) {
    double block_order = 0.0;
    for (std::size_t n = 0; n < 64; ++n) {
      double block = 0.0;
      for (std::size_t j = 0; j < 16; ++j) block += fine.increment(n * 16 + j)[k];
      block_order += block;
    }
    EXPECT_EQ(coarse.total(k), block_order);
  }
}

TEST(Auxiliary, DimensionsAndDeterminism) {
  const TimeGrid g(1.0, 64);
  const auto w = generate_auxiliary(g, 4, 10, stream::kAuxiliary);
  const auto w2 = generate_auxiliary(g, 4, 10, stream::kAuxiliary);
  EXPECT_EQ(w.dim(), 4u);
  EXPECT_TRUE(std::equal(w.increments().begin(), w.increments().end(), w2.increments().begin()));
  const auto driving = generate_driving_path(g, 4, 10, 0);
  EXPECT_FALSE(std::equal(w.increments().begin(), w.increments().end(),
                          driving.increments().begin()));
  EXPECT_EQ(generate_auxiliary(g, 1, 10, stream::kAuxiliary).dim(), 1u);
}

TEST(Auxiliary, RejectsDrivingTag) {
  EXPECT_THROW(generate_auxiliary(TimeGrid(1.0, 8), 1, 10, stream::kDriving),
               std::invalid_argument);
  EXPECT_THROW(generate_auxiliary(TimeGrid(1.0, 8), 1, 10, stream::kLimitDriving, 0,
                                  stream::kLimitDriving),
               std::invalid_argument);
}

TEST(Auxiliary, IndependentOfDrivingStream) {
  const TimeGrid g(1.0, 1 << 18);
  const auto w = generate_driving_path(g, 1, 3, 0);
  const auto aux = generate_auxiliary(g, 1, 3, stream::kAuxiliary);
  double s = 0, a = 0, b = 0;
  for (std::size_t i = 0; i < g.steps(); ++i) {
    s += w.increments()[i] * aux.increments()[i];
    a += w.increments()[i] * w.increments()[i];
    b += aux.increments()[i] * aux.increments()[i];
  }
  EXPECT_NEAR(s / std::sqrt(a * b), 0.0, 0.01);
}

TEST(DrivingPath, PureFunctionOfMasterAndIndex) {
  const TimeGrid g(1.0, 32);
  const auto later = generate_driving_path(g, 2, 5, 17);
  for (std::uint64_t i = 0; i < 17; ++i) (void)generate_driving_path(g, 2, 5, i);
  const auto again = generate_driving_path(g, 2, 5, 17);
  EXPECT_TRUE(std::equal(later.increments().begin(), later.increments().end(),
                         again.increments().begin()));
  EXPECT_EQ(later.seed(), derive_seed(5, stream::kDriving, 17));
}

TEST(PathDump, RoundTrip) {
  const auto p = generate_path(TimeGrid(0.75, 24), 3, 123);
  std::stringstream buf;
  write_path(buf, p);
  EXPECT_EQ(buf.str().size(), 32u + 24u * 3u * 8u);
  const auto q = read_path(buf);
  EXPECT_EQ(q.grid(), p.grid());
  EXPECT_EQ(q.dim(), 3u);
  EXPECT_EQ(q.seed(), 123u);
  EXPECT_TRUE(std::equal(p.increments().begin(), p.increments().end(), q.increments().begin()));
}

TEST(PathDump, LittleEndianHeader) {
  const BrownianPath p(TimeGrid(1.0, 1), 1, 0x0102030405060708ULL, {0.5});
  std::stringstream buf;
  write_path(buf, p);
  const std::string s = buf.str();
  EXPECT_EQ(static_cast<unsigned char>(s[8]), 1u);   // N = 1
  EXPECT_EQ(static_cast<unsigned char>(s[24]), 8u);  // seed low byte first
  EXPECT_EQ(static_cast<unsigned char>(s[31]), 1u);
}
