#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ruingame/problem.hpp"

namespace ruingame {

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::string message;       ///< empty when passed
  std::optional<double> at;  ///< violating wealth for grid-checked properties
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool ok() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  std::vector<ValidationCheck> failures() const {
    std::vector<ValidationCheck> out;
    for (const auto& c : checks)
      if (!c.passed) out.push_back(c);
    return out;
  }

  /// First failure message, or empty.
  std::string first_failure() const {
    for (const auto& c : checks)
      if (!c.passed) return c.message;
    return {};
  }

  std::string to_string() const {
    std::ostringstream os;
    for (const auto& c : checks) {
      os << (c.passed ? "[ok]   " : "[FAIL] ") << c.name;
      if (!c.passed) os << ": " << c.message;
      os << '\n';
    }
    return os.str();
  }
};

namespace detail {

inline std::string where(double x, double a) {
  if (x == a) return "x=a";
  std::ostringstream os;
  os.precision(17);
  os << "x=" << x;
  return os.str();
}

/// 10,001 equispaced points on [a, a + 100] plus every breakpoint >= a.
inline std::vector<double> validation_grid(double a, const ScalarFunction& f) {
  constexpr int n = 10'001;
  std::vector<double> xs;
  xs.reserve(n + 8);
  for (int i = 0; i < n; ++i) xs.push_back(a + 100.0 * i / (n - 1));
  for (double b : f.breakpoints())
    if (b >= a) xs.push_back(b);
  std::sort(xs.begin(), xs.end());
  return xs;
}

}  // namespace detail

/// Checks every standing assumption on (market, e, l). Violations are
/// reported as entries, never thrown.
inline ValidationReport validate_problem(const Problem& p) {
  ValidationReport rep;
  const auto& m = p.market;
  const auto add = [&](std::string name, bool ok, std::string msg = {},
                       std::optional<double> at = std::nullopt) {
    rep.checks.push_back({std::move(name), ok, ok ? std::string{} : std::move(msg), at});
  };

  const bool finite = std::isfinite(m.mu) && std::isfinite(m.r) && std::isfinite(m.sigma) &&
                      std::isfinite(m.lambda) && std::isfinite(m.rho) && std::isfinite(m.a);
  add("market constants finite", finite, "market constants must be finite");
  add("mu > r", m.mu > m.r, "mu > r violated");
  add("r > 0", m.r > 0, "r > 0 violated");
  add("sigma > 0", m.sigma > 0, "sigma > 0 violated");
  add("lambda > 0", m.lambda > 0, "lambda > 0 violated");
  add("rho > 0", m.rho > 0, "rho > 0 violated");
  add("a > 0", m.a > 0, "a > 0 violated");

  const double a = m.a;
  const bool e_domain = p.e.domain_lo() <= a;
  const bool l_domain = p.l.domain_lo() <= a;
  add("e defined on [a, inf)", e_domain, "e domain_lo exceeds a");
  add("l defined on [a, inf)", l_domain, "l domain_lo exceeds a");
  if (!e_domain || !l_domain || !finite) return rep;

  // e: finite upper bound M0 that dominates every evaluation, Lipschitz.
  const double m0 = p.e.sup();
  add("e bounded above", std::isfinite(m0), "e has no finite upper bound M0");
  add("e Lipschitz", std::isfinite(p.e.lipschitz()), "e is not globally Lipschitz");
  if (std::isfinite(m0)) {
    std::optional<double> bad;
    for (double x : detail::validation_grid(a, p.e)) {
      const double v = p.e(x);
      if (!std::isfinite(v) || v > m0) {
        bad = x;
        break;
      }
    }
    add("e <= M0", !bad, bad ? "e(x) <= M0 violated at " + detail::where(*bad, a) : "", bad);
  }

  // l: 0 <= l < lambda, non-increasing, Lipschitz.
  add("l Lipschitz", std::isfinite(p.l.lipschitz()), "l is not globally Lipschitz");
  const auto grid = detail::validation_grid(a, p.l);
  std::optional<double> neg, high, rising;
  double prev = p.l(grid.front());
  for (double x : grid) {
    const double v = p.l(x);
    if (!neg && !(v >= 0)) neg = x;
    if (!high && !(v < m.lambda)) high = x;
    if (!rising && v > prev) rising = x;
    prev = v;
  }
  if (!neg && !(p.l.inf() >= 0)) {
    add("l >= 0", false, "l(x) >= 0 violated (analytic lower bound " +
                             std::to_string(p.l.inf()) + ")");
  } else {
    add("l >= 0", !neg, neg ? "l(x) >= 0 violated at " + detail::where(*neg, a) : "", neg);
  }
  // Non-increasing l attains its sup over [a, inf) at a, so l(a) < lambda is
  // the analytic form of the bound.
  if (!high && !(p.l(a) < m.lambda && p.l.sup() < std::numeric_limits<double>::infinity())) {
    add("l < lambda", false, "l(x) < lambda violated (analytic bound)");
  } else {
    add("l < lambda", !high, high ? "l(x) < lambda violated at " + detail::where(*high, a) : "",
        high);
  }
  if (!rising && !p.l.non_increasing()) {
    add("l non-increasing", false, "l non-increasing violated (analytic slope check)");
  } else {
    add("l non-increasing", !rising,
        rising ? "l non-increasing violated at " + detail::where(*rising, a) : "", rising);
  }
  return rep;
}

}  // namespace ruingame
