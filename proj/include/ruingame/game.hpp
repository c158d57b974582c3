#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "ruingame/level.hpp"
#include "ruingame/problem.hpp"
#include "ruingame/quadrature.hpp"

namespace ruingame {

namespace detail {

inline void require_in_domain(double x, double a) {
  if (!(x >= a)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "wealth x=" << x << " is below the ruin level a=" << a;
    throw std::domain_error(msg.str());
  }
}

/// Shrinks [lo, hi] around the left edge of {x : f(x) < 0}, given
/// f(lo) >= 0 and f(hi) < 0.
template <class F>
double bisect_sign_change(F&& f, double lo, double hi, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < 0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Barrier b = inf{x >= a : e(x) < 0}, infinite when e never turns negative.
inline Level compute_b(const ScalarFunction& e, double a) {
  if (e(a) < 0) return Level::at(a);
  const double tol = 1e-12 * (1.0 + std::abs(a));
  const auto eval = [&](double x) { return e(x); };

  return std::visit(
      overloaded{
          [&](const shape::Constant&) { return Level::infinite(); },
          [&](const shape::Affine& f) {
            if (f.slope >= 0) return Level::infinite();
            return Level::at(std::max(a, e.domain_lo() - f.intercept / f.slope));
          },
          [&](const shape::PiecewiseLinear& f) {
            double lo = a;
            for (double x : f.breaks) {
              if (x <= lo) continue;
              if (e(x) < 0) return Level::at(detail::bisect_sign_change(eval, lo, x, tol));
              lo = x;
            }
            return Level::infinite();  // constant extension keeps the last sign
          },
          [&](const shape::ExpDecay& f) {
            // Monotone: negative somewhere iff the limit at infinity is.
            const bool decreasing = f.amplitude * f.rate > 0;
            if (!decreasing) return Level::infinite();
            if (f.rate > 0 && f.offset >= 0) return Level::infinite();
            double step = 1.0, hi = a + step;
            while (!(e(hi) < 0)) {
              step *= 2.0;
              hi = a + step;
              if (!std::isfinite(hi)) return Level::infinite();
            }
            return Level::at(detail::bisect_sign_change(eval, a, hi, tol));
          },
      },
      e.shape());
}

/// Safe level and the barrier it is capped by.
struct SafeLevel {
  Level d = Level::infinite();
  Level b = Level::infinite();
  /// Quadrature failed to converge while bracketing d (integrand blow-up).
  bool quadrature_warning = false;
};

/// Safe level d = b ^ inf{y > a : rho - int_a^y hazard(u)/e(u) du = 0}.
///
/// F(y) = rho - int_a^y ... is strictly decreasing on [a, b); the root is
/// bracketed by [a, a + rho M0 / (lambda - l(a) + theta^2/2)] and found by
/// bisection with the integral carried incrementally from the left end.
inline SafeLevel compute_d(const Problem& p, const QuadratureOptions& quad = {}) {
  const double a = p.market.a;
  const double rho = p.market.rho;
  SafeLevel out;
  out.b = compute_b(p.e, a);
  if (out.b == Level::at(a)) {
    out.d = out.b;
    return out;
  }

  const double m0 = p.e.sup();
  const double bracket = a + rho * m0 / p.hazard(a);
  double hi = out.b.is_finite() ? std::min(out.b.value(), bracket) : bracket;
  const bool capped_by_b = out.b.is_finite() && out.b.value() <= bracket;
  const double hi0 = hi;

  const auto integrand = [&](double u) { return p.hazard(u) / p.e(u); };
  double lo = a;
  double acc = 0.0;  // int_a^lo
  while (hi - lo > 1e-10 * std::abs(hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const auto piece = adaptive_simpson(integrand, lo, mid, quad);
    if (!piece.converged) out.quadrature_warning = true;
    if (!piece.converged || acc + piece.value >= rho) {
      hi = mid;
    } else {
      lo = mid;
      acc += piece.value;
    }
  }
  if (capped_by_b && hi == hi0) {
    out.d = out.b;  // F stayed positive all the way up to b
  } else {
    out.d = Level::at(0.5 * (lo + hi));
  }
  return out;
}

/// Closed-form solution of the limiting differential game.
///
/// Holds the problem by value; U and pi* are evaluated on demand by adaptive
/// quadrature from a.
class GameSolution {
 public:
  explicit GameSolution(Problem problem, QuadratureOptions quad = {})
      : problem_(std::move(problem)), quad_(quad), level_(compute_d(problem_, quad_)) {
    m1_ = compute_m1();
  }

  const Problem& problem() const noexcept { return problem_; }
  Level b() const noexcept { return level_.b; }
  Level d() const noexcept { return level_.d; }
  bool quadrature_warning() const noexcept { return level_.quadrature_warning; }
  double quadrature_tol() const noexcept { return quad_.abs_tol; }
  const QuadratureOptions& quadrature() const noexcept { return quad_; }

  /// int_a^x hazard(u)/e(u) du, the accumulated cost rate below x.
  double cost_integral(double x) const {
    const double a = problem_.market.a;
    detail::require_in_domain(x, a);
    const auto integrand = [&](double u) { return problem_.hazard(u) / problem_.e(u); };
    return adaptive_simpson(integrand, a, x, quad_).value;
  }

  /// Value of the game U(x).
  double value(double x) const {
    detail::require_in_domain(x, problem_.market.a);
    if (!level_.d.above(x)) return 0.0;
    return std::clamp(problem_.market.rho - cost_integral(x), 0.0, problem_.market.rho);
  }

  /// Optimal feedback investment pi*(x).
  double pi_star(double x) const {
    detail::require_in_domain(x, problem_.market.a);
    if (!level_.d.above(x)) return 0.0;
    const auto& m = problem_.market;
    return (m.mu - m.r) * problem_.e(x) / (m.sigma * m.sigma * problem_.hazard(x));
  }

  /// Bound M1 on |pi*|: 1.1 times the sup of |pi*| over a grid of [a, d].
  double m1() const noexcept { return m1_; }

 private:
  double compute_m1() const {
    const double a = problem_.market.a;
    const double top = level_.d.value_or(a + 100.0);
    constexpr int n = 10'001;
    double sup = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = a + (top - a) * i / (n - 1);
      sup = std::max(sup, std::abs(pi_star(x)));
    }
    return 1.1 * sup;
  }

  Problem problem_;
  QuadratureOptions quad_;
  SafeLevel level_;
  double m1_ = 0.0;
};

/// U(x) for a one-off query.
inline double value_U(const Problem& p, double x) { return GameSolution(p).value(x); }

/// pi*(x) for a one-off query.
inline double policy_pi_star(const Problem& p, double x) { return GameSolution(p).pi_star(x); }

}  // namespace ruingame
