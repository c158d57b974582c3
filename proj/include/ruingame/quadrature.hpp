#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace ruingame {

struct QuadratureResult {
  double value = 0.0;
  bool converged = true;
  std::size_t intervals = 0;  ///< accepted leaf intervals
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  std::size_t max_intervals = std::size_t{1} << 20;
  int min_depth = 4;
};

/// Adaptive Simpson quadrature of f over [lo, hi].
///
/// Each split halves the local tolerance; a leaf is accepted once
/// |S_left + S_right - S| <= 15 tol (with Richardson correction). The local
/// tolerance is floored at a few ulps of the panel value and at one ulp of the
/// integral's magnitude, so that round-off in f (e.g. cancellation near a
/// pole) cannot stall refinement. Exceeding max_intervals, or hitting a
/// non-finite sample, returns with converged = false.
template <class F>
QuadratureResult adaptive_simpson(F&& f, double lo, double hi,
                                  const QuadratureOptions& opt = {}) {
  QuadratureResult out;
  if (lo == hi) return out;
  double sign = 1.0;
  if (hi < lo) {
    std::swap(lo, hi);
    sign = -1.0;
  }

  struct Panel {
    double a, b, fa, fm, fb, whole, tol;
    int depth;
  };
  const auto simpson = [](double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  };

  const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double magnitude = (hi - lo) / 6.0 * (std::abs(fa) + 4.0 * std::abs(fm) + std::abs(fb));
  std::vector<Panel> stack;
  stack.push_back({lo, hi, fa, fm, fb, simpson(lo, hi, fa, fm, fb), opt.abs_tol, 0});

  // Kahan-compensated sum of accepted panels, so the result does not depend on
  // the order in which 10^5+ leaves are folded in.
  double sum = 0.0, comp = 0.0;
  const auto accumulate = [&](double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };

  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m), rm = 0.5 * (m + p.b);
    const double flm = f(lm), frm = f(rm);
    if (!std::isfinite(flm) || !std::isfinite(frm) || !std::isfinite(p.whole)) {
      out.converged = false;
      out.value = sign * std::numeric_limits<double>::infinity();
      return out;
    }
    const double left = simpson(p.a, m, p.fa, flm, p.fm);
    const double right = simpson(m, p.b, p.fm, frm, p.fb);
    const double delta = left + right - p.whole;
    const double tol = std::max({p.tol, 64.0 * eps * std::abs(left + right),
                                 eps * std::max(magnitude, std::abs(sum))});
    const bool tiny = (m <= p.a) || (m >= p.b);
    if (p.depth >= opt.min_depth && (std::abs(delta) <= 15.0 * tol || tiny)) {
      accumulate(left + right + delta / 15.0);
      ++out.intervals;
      continue;
    }
    if (out.intervals + stack.size() + 2 > opt.max_intervals) {
      out.converged = false;
      accumulate(left + right + delta / 15.0);
      ++out.intervals;
      continue;
    }
    stack.push_back({m, p.b, p.fm, frm, p.fb, right, 0.5 * p.tol, p.depth + 1});
    stack.push_back({p.a, m, p.fa, flm, p.fm, left, 0.5 * p.tol, p.depth + 1});
  }
  out.value = sign * sum;
  return out;
}

}  // namespace ruingame
