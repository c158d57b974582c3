#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "ruingame/game.hpp"
#include "ruingame/policy.hpp"
#include "ruingame/saddle.hpp"
#include "ruingame/state_ode.hpp"

using namespace ruingame;

namespace {
const auto zero_pi = [](double) { return 0.0; };
const auto no_push = [](double) { return 0.0; };
}  // namespace

TEST(StateOde, ZeroPolicyIsLinearDescent) {
  const auto p = fixtures::p0();
  const auto path = integrate_state_ode(p, zero_pi, no_push, 2.0, 10.0, 0.01);
  ASSERT_TRUE(path.tau);
  EXPECT_NEAR(*path.tau, 2.0, 1e-11);
  EXPECT_EQ(path.values.back(), 1.0);
  for (std::size_t i = 0; i < path.times.size(); ++i)
    EXPECT_NEAR(path.values[i], std::max(1.0, 2.0 - 0.5 * path.times[i]), 1e-12);
}

TEST(StateOde, StaysAtBarrier) {
  const auto p = fixtures::affine_e();
  const auto path = integrate_state_ode(p, zero_pi, no_push, 6.0, 5.0, 0.01);
  EXPECT_FALSE(path.tau);
  for (double v : path.values) EXPECT_NEAR(v, 6.0, 1e-14);
  EXPECT_NEAR(path.times.back(), 5.0, 1e-12);
}

TEST(StateOde, OptimalPolicyUnderSaddlePushMatchesZeroPolicy) {
  const auto p = fixtures::affine_e();
  const GameSolution sol(p);
  const PolicyFunction pi(FeedbackPolicy::optimal(), sol);
  const double theta = p.market.theta();
  const auto psi = [&](double) { return -theta; };
  const auto a = integrate_state_ode(p, pi, psi, 3.0, 20.0, 1e-3);
  const auto b = integrate_state_ode(p, zero_pi, psi, 3.0, 20.0, 1e-3);
  ASSERT_EQ(a.values.size(), b.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-13);
  ASSERT_TRUE(a.tau && b.tau);
  EXPECT_NEAR(*a.tau, *b.tau, 1e-12);
}

TEST(StateOde, AffineHittingTimeMatchesClosedForm) {
  // phi' = -(0.5 - 0.1 (phi - 1)) gives tau = 10 ln(0.5 / e(x)).
  const auto p = fixtures::affine_e();
  const auto path = integrate_state_ode(p, zero_pi, no_push, 4.0, 50.0, 1e-2);
  ASSERT_TRUE(path.tau);
  EXPECT_NEAR(*path.tau, 10.0 * std::log(0.5 / 0.2), 1e-10);
}

TEST(StateOde, NonFiniteStateIsAFault) {
  const auto p = fixtures::p0();
  const auto blowup = [](double) { return std::numeric_limits<double>::infinity(); };
  EXPECT_THROW(integrate_state_ode(p, blowup, no_push, 2.0, 1.0, 0.1), NumericalFault);
}

TEST(GameCost, EmptyHorizon) {
  const auto p = fixtures::p0();
  const auto path = integrate_state_ode(p, zero_pi, no_push, 2.0, 10.0, 0.01);
  const auto c = game_cost(p, no_push, 0.0, path);
  EXPECT_EQ(c.total, 0.0);
  EXPECT_THROW(game_cost(p, no_push, -1.0, path), std::domain_error);
}

TEST(GameCost, SaddleExampleIsU) {
  const auto p = fixtures::p0();
  const GameSolution sol(p);
  const PolicyFunction pi(FeedbackPolicy::optimal(), sol);
  const auto psi = [](double) { return -0.3; };
  const auto path = integrate_state_ode(p, pi, psi, 2.0, 3.0, 1e-3);
  const auto c = game_cost(p, psi, 2.0, path);
  EXPECT_NEAR(c.total, 0.83, 1e-10);
  EXPECT_EQ(c.terminal, 1.0);
}

TEST(GameCost, NoPushExample) {
  const auto p = fixtures::p0();
  const auto path = integrate_state_ode(p, zero_pi, no_push, 2.0, 3.0, 1e-3);
  EXPECT_NEAR(game_cost(p, no_push, 2.0, path).total, 0.92, 1e-10);
}

TEST(GameCost, StartAtRuinLevelCostsRho) {
  const auto p = fixtures::p0();
  const auto path = integrate_state_ode(p, zero_pi, no_push, 1.0, 3.0, 1e-3);
  EXPECT_EQ(game_cost(p, no_push, 0.0, path).total, 1.0);
}

TEST(GameCost, SaddleIdentityWithNonConstantL) {
  const auto p = fixtures::decaying_l();
  const GameSolution sol(p);
  for (double x : {1.5, 2.0, 4.0}) {
    const auto sc = saddle_controls(sol, x);
    const auto psi = [&](double) { return sc.psi_dot; };
    for (const auto& spec : {FeedbackPolicy::optimal(), FeedbackPolicy::zero(),
                             FeedbackPolicy::constant(1.0), FeedbackPolicy::constant(sol.m1())}) {
      const PolicyFunction pi(spec, sol);
      const auto path = integrate_state_ode(p, pi, psi, x, sc.t_star + 1e-3, 1e-3);
      EXPECT_NEAR(game_cost(p, psi, sc.t_star, path).total, sol.value(x), 1e-6) << "x=" << x;
    }
  }
}

TEST(Simpson, NonUniformExactForQuadratics) {
  std::vector<double> t = {0.0, 0.1, 0.35, 0.5, 0.9, 1.0, 1.7};
  std::vector<double> f;
  for (double v : t) f.push_back(v * v - v + 3);
  EXPECT_NEAR(detail::simpson_nonuniform(t, f), std::pow(1.7, 3) / 3 - 1.7 * 1.7 / 2 + 5.1,
              1e-12);
  t.pop_back();
  f.pop_back();
  EXPECT_NEAR(detail::simpson_nonuniform(t, f), 1.0 / 3 - 0.5 + 3, 1e-12);
}

TEST(Policy, TabulatedInterpolationAndBounds) {
  const GameSolution sol(fixtures::p0());
  FeedbackPolicy spec;
  spec.kind = PolicyKind::tabulated;
  spec.table = {{1.0, 2.0}, {3.0, 4.0}};
  const PolicyFunction pi(spec, sol);
  EXPECT_DOUBLE_EQ(pi(2.0), 3.0);
  EXPECT_DOUBLE_EQ(pi(10.0), 4.0);
  EXPECT_EQ(pi.bound(), 4.0);
  spec.m1 = 3.0;
  EXPECT_FALSE(PolicyFunction(spec, sol).within_bound());
  EXPECT_TRUE(PolicyFunction(FeedbackPolicy::optimal(), sol).within_bound());
  spec.table = {{2.0, 1.0}, {1.0, 1.0}};
  EXPECT_THROW(PolicyFunction(spec, sol), std::invalid_argument);
}
