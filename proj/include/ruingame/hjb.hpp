#pragma once

#include <limits>

#include "ruingame/problem.hpp"

namespace ruingame {

struct HjbResidual {
  double residual = 0.0;
  double derivative = 0.0;  ///< central-difference V'(x)
  bool flagged = false;     ///< V'(x) >= 0: the inf over p is -infinity
};

/// Residual of the Isaacs equation at x for a candidate value function V.
///
/// The inner sup over theta is attained at sigma p V', the outer inf over p
/// at -(mu - r)/(sigma^2 V') when V' < 0, which collapses the bracket to
///   R(x) = -e(x) V'(x) - theta^2/2 - lambda + l(x).
/// V' is a central difference with step h.
template <class ValueFn>
HjbResidual hjb_residual(const Problem& p, const ValueFn& v, double x, double h) {
  HjbResidual out;
  out.derivative = (v(x + h) - v(x - h)) / (2.0 * h);
  if (!(out.derivative < 0)) {
    out.flagged = true;
    out.residual = -std::numeric_limits<double>::infinity();
    return out;
  }
  out.residual = -p.e(x) * out.derivative - p.hazard(x);
  return out;
}

}  // namespace ruingame
