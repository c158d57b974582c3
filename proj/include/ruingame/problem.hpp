#pragma once

#include "ruingame/market.hpp"
#include "ruingame/scalar_function.hpp"

namespace ruingame {

/// Problem data: market constants plus excess consumption e and penalty l.
struct Problem {
  MarketParams market;
  ScalarFunction e;
  ScalarFunction l;

  /// lambda - l(x) + theta^2/2; strictly positive on valid problems.
  double hazard(double x) const { return market.lambda - l(x) + market.half_theta_sq(); }

  friend bool operator==(const Problem&, const Problem&) = default;
};

}  // namespace ruingame
