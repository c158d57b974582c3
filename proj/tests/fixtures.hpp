#pragma once

#include <random>

#include "ruingame/problem.hpp"

namespace fixtures {

using ruingame::MarketParams;
using ruingame::Problem;
using ruingame::ScalarFunction;

inline MarketParams p0_market() { return {0.08, 0.02, 0.2, 0.04, 1.0, 1.0}; }

/// e = 0.5, l = 0.
inline Problem p0() {
  return {p0_market(), ScalarFunction::constant(0.5, 1.0), ScalarFunction::constant(0.0, 1.0)};
}

/// e = 0.5 - 0.1 (x - 1), l = 0.
inline Problem affine_e() {
  auto p = p0();
  p.e = ScalarFunction::affine(0.5, -0.1, 1.0);
  return p;
}

/// l = 0.03 max(0, 1 - (x - 1)).
inline Problem ramp_l() {
  auto p = p0();
  p.l = ScalarFunction::piecewise_linear({1.0, 2.0}, {0.03, 0.0}, 1.0);
  return p;
}

/// l = 0.03 exp(-(x - 1)).
inline Problem decaying_l() {
  auto p = p0();
  p.l = ScalarFunction::exp_decay(0.03, 1.0, 0.0, 1.0);
  return p;
}

/// Random problem satisfying the standing assumptions: mu > r > 0, l
/// non-increasing in [0, lambda), e bounded and Lipschitz, of mixed shapes.
inline Problem random_problem(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MarketParams m;
  m.r = 0.005 + 0.04 * u(gen);
  m.mu = m.r + 0.01 + 0.1 * u(gen);
  m.sigma = 0.1 + 0.3 * u(gen);
  m.lambda = 0.01 + 0.08 * u(gen);
  m.rho = 0.2 + 2.0 * u(gen);
  m.a = 0.5 + 2.0 * u(gen);
  const double a = m.a;

  ScalarFunction e;
  switch (static_cast<int>(4 * u(gen))) {
    case 0: e = ScalarFunction::constant(0.1 + u(gen), a); break;
    case 1: e = ScalarFunction::affine(0.1 + u(gen), -0.3 * u(gen), a); break;
    case 2: {
      const double v0 = 0.2 + u(gen), v1 = -0.5 + u(gen), v2 = -0.5 + u(gen);
      e = ScalarFunction::piecewise_linear({a, a + 1 + 3 * u(gen), a + 5 + 5 * u(gen)},
                                           {v0, v1, v2}, a);
      break;
    }
    default: e = ScalarFunction::exp_decay(0.2 + u(gen), 0.1 + u(gen), -0.2 + 0.4 * u(gen), a);
  }

  ScalarFunction l;
  const double l0 = m.lambda * 0.9 * u(gen);
  switch (static_cast<int>(3 * u(gen))) {
    case 0: l = ScalarFunction::constant(l0, a); break;
    case 1: l = ScalarFunction::piecewise_linear({a, a + 0.5 + 2 * u(gen)}, {l0, l0 * u(gen)}, a); break;
    default: l = ScalarFunction::exp_decay(l0, 0.2 + u(gen), 0.0, a);
  }
  return {m, e, l};
}

}  // namespace fixtures
