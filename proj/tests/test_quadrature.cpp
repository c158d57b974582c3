#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ruingame/quadrature.hpp"

using ruingame::adaptive_simpson;
using ruingame::QuadratureOptions;

TEST(AdaptiveSimpson, PolynomialsAreExact) {
  const auto r = adaptive_simpson([](double x) { return 3 * x * x * x - x + 2; }, -1.0, 2.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 3.0 * (16.0 - 1.0) / 4.0 - (4.0 - 1.0) / 2.0 + 6.0, 1e-12);
}

TEST(AdaptiveSimpson, SmoothIntegrands) {
  EXPECT_NEAR(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 3.0).value,
              std::exp(3.0) - 1.0, 1e-11);
  EXPECT_NEAR(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value,
              2.0, 1e-12);
  EXPECT_NEAR(adaptive_simpson([](double x) { return 1.0 / (1.0 - 0.1 * x); }, 0.0, 9.0).value,
              10.0 * std::log(10.0), 1e-10);
}

TEST(AdaptiveSimpson, ReversedAndEmptyRanges) {
  const auto f = [](double x) { return x * x; };
  EXPECT_NEAR(adaptive_simpson(f, 2.0, 0.0).value, -8.0 / 3.0, 1e-13);
  EXPECT_EQ(adaptive_simpson(f, 1.0, 1.0).value, 0.0);
}

TEST(AdaptiveSimpson, KinkIsResolved) {
  const auto r = adaptive_simpson([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 0.5 * (0.09 + 0.49), 1e-12);
}

TEST(AdaptiveSimpson, NonFiniteSampleIsNotConverged) {
  const auto r = adaptive_simpson([](double x) { return 1.0 / (1.0 - x); }, 0.0, 1.0);
  EXPECT_FALSE(r.converged);
}

TEST(AdaptiveSimpson, IntervalCapIsNotConverged) {
  QuadratureOptions opt;
  opt.max_intervals = 8;
  const auto r = adaptive_simpson([](double x) { return std::sin(50 * x); }, 0.0, 10.0, opt);
  EXPECT_FALSE(r.converged);
}
