#pragma once

#include "ruingame/game.hpp"

namespace ruingame {

struct SaddleControls {
  double psi_dot = 0.0;  ///< nature's constant path rate, -theta
  double t_star = 0.0;   ///< termination time: hitting time of a under phi' = -e(phi)
  double bound = 0.0;    ///< (rho - U(x)) / (lambda - l(a) + theta^2/2)
  bool bound_holds = true;
};

/// Maximizer's saddle controls at x.
///
/// Under psi' = -theta the state obeys phi' = -e(phi) for every policy, so
/// T* = int_a^x du / e(u) when x < d, and 0 otherwise.
inline SaddleControls saddle_controls(const GameSolution& sol, double x) {
  const auto& p = sol.problem();
  const auto& m = p.market;
  detail::require_in_domain(x, m.a);

  SaddleControls out;
  out.psi_dot = -m.theta();
  if (sol.d().above(x)) {
    const auto inv_e = [&](double u) { return 1.0 / p.e(u); };
    out.t_star = adaptive_simpson(inv_e, m.a, x, sol.quadrature()).value;
  }
  out.bound = (m.rho - sol.value(x)) / p.hazard(m.a);
  out.bound_holds = out.t_star <= out.bound * (1.0 + 1e-9) + 1e-12;
  return out;
}

}  // namespace ruingame
