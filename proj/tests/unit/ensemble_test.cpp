#include <gtest/gtest.h>

#include <cstdlib>
#include <stdexcept>

#include "tamed/ensemble.hpp"
#include "tamed/limit_process.hpp"
#include "tamed/noise.hpp"
#include "tamed/scheme.hpp"
#include "tamed/studies.hpp"

using namespace tamed;

namespace {

std::vector<double> terminal_errors(const ExecutionPolicy& policy) {
  const auto q = builtin_quintic_multiplicative();
  const TimeGrid fine(1.0, 1024);
  return map_members(
      64,
      [&](std::size_t i) {
        const auto w = generate_driving_path(fine, 2, 2024, i);
        const auto coarse = coarsen(w, 16);
        const auto x = integrate(q, TamingConfig::multiplicative(0.5, 4), coarse.grid(),
                                 std::vector<double>{1.0}, coarse);
        const auto r = integrate(q, TamingConfig::multiplicative(1.0, 4), fine,
                                 std::vector<double>{1.0}, w);
        return x.terminal[0] - r.terminal[0];
      },
      policy);
}

}  // namespace

TEST(Ensemble, ParallelMatchesSerialBitwise) {
  const auto serial = terminal_errors(ExecutionPolicy::serial());
  for (int threads : {1, 2, 3, 8}) {
    const auto parallel = terminal_errors({true, threads});
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) ASSERT_EQ(serial[i], parallel[i]) << i;
  }
}

TEST(Ensemble, StudiesMatchSerialBitwise) {
  const auto q = builtin_quintic_multiplicative();
  StudySetup s;
  s.paths = 24;
  s.execution = ExecutionPolicy::serial();
  const auto a = strong_order_study(q, SchemeVariant::MultiplicativeTamed, 0.5, {16, 32}, 256, s);
  s.execution = {true, 4};
  const auto b = strong_order_study(q, SchemeVariant::MultiplicativeTamed, 0.5, {16, 32}, 256, s);
  EXPECT_EQ(a.regression.slope, b.regression.slope);
  for (std::size_t i = 0; i < a.points.size(); ++i) EXPECT_EQ(a.points[i].mse, b.points[i].mse);

  LimitConfig lc;
  lc.alpha = 0.5;
  lc.fine_steps = 256;
  lc.master_seed = 3;
  const auto c1 = limit_mean_square_curve(q, lc, 16, 8, ExecutionPolicy::serial());
  const auto c2 = limit_mean_square_curve(q, lc, 16, 8, {true, 3});
  for (std::size_t i = 0; i < c1.size(); ++i) EXPECT_EQ(c1[i].mean_square, c2[i].mean_square);
}

TEST(Ensemble, ResultsIndexedByMember) {
  const auto r = map_members_parallel(100, [](std::size_t i) { return static_cast<int>(i * i); }, 4);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(r[i], static_cast<int>(i * i));
}

TEST(Ensemble, FirstExceptionByIndexIsRethrown) {
  auto fn = [](std::size_t i) -> int {
    if (i == 7) throw std::runtime_error("seven");
    if (i == 40) throw std::logic_error("forty");
    return 0;
  };
  try {
    map_members_parallel(64, fn, 4);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "seven");
  }
  EXPECT_THROW(map_members_serial(64, fn), std::runtime_error);
}

TEST(Ensemble, ThreadCountFromEnvironment) {
  setenv("TAMED_THREADS", "3", 1);
  EXPECT_EQ(default_thread_count(), 3);
  setenv("TAMED_THREADS", "junk", 1);
  EXPECT_GE(default_thread_count(), 1);
  unsetenv("TAMED_THREADS");
  EXPECT_GE(default_thread_count(), 1);
}
