#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ruingame/errors.hpp"
#include "ruingame/game.hpp"

namespace ruingame {

/// Deterministic state trajectory on a time grid.
struct StatePath {
  std::vector<double> times;
  std::vector<double> values;
  std::optional<double> tau;  ///< first hitting time of a; empty if not reached
};

struct GameCost {
  double running = 0.0;   ///< int_0^{T ^ tau} (-lambda + l(phi) - psi'^2/2) dt
  double terminal = 0.0;  ///< rho 1{tau <= T}
  double total = 0.0;
};

/// Integrates phi' = -e(phi) + (mu - r) pi(phi) + sigma pi(phi) psi'(t) from x
/// with classical RK4 until t_max or the first time phi reaches a.
///
/// The crossing time is located by bisection on the length of the final RK4
/// step. Coefficients are evaluated at max(phi, a), so intermediate stages of
/// the crossing step never leave the domain of e, l and pi.
template <class Policy, class PathRate>
StatePath integrate_state_ode(const Problem& p, const Policy& pi, const PathRate& psi_dot,
                              double x, double t_max, double dt) {
  const auto& m = p.market;
  const double a = m.a;
  detail::require_in_domain(x, a);
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  if (!(t_max >= 0)) throw std::invalid_argument("t_max must be non-negative");

  const auto rhs = [&](double t, double phi) {
    if (!std::isfinite(phi)) throw NumericalFault("state ODE produced a non-finite value", t);
    const double s = std::max(phi, a);
    const double inv = pi(s);
    return -p.e(s) + (m.mu - m.r) * inv + m.sigma * inv * psi_dot(t);
  };
  const auto rk4 = [&](double t, double phi, double h) {
    const double k1 = rhs(t, phi);
    const double k2 = rhs(t + 0.5 * h, phi + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, phi + 0.5 * h * k2);
    const double k4 = rhs(t + h, phi + h * k3);
    return phi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  StatePath path;
  path.times.push_back(0.0);
  path.values.push_back(x);
  if (x <= a) {
    path.tau = 0.0;
    return path;
  }

  double t = 0.0, phi = x;
  while (t < t_max) {
    const double h = std::min(dt, t_max - t);
    double next;
    try {
      next = rk4(t, phi, h);
    } catch (const NumericalFault&) {
      next = std::numeric_limits<double>::quiet_NaN();
    }
    if (!std::isfinite(next)) throw NumericalFault("state ODE produced a non-finite value", t, phi);
    if (next <= a) {
      double lo = 0.0, hi = h;
      while (hi - lo > 1e-12 * std::max(1.0, t + hi)) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (rk4(t, phi, mid) <= a)
          hi = mid;
        else
          lo = mid;
      }
      const double tau = t + 0.5 * (lo + hi);
      path.times.push_back(tau);
      path.values.push_back(a);
      path.tau = tau;
      return path;
    }
    t = (h == dt) ? t + dt : t_max;
    phi = next;
    path.times.push_back(t);
    path.values.push_back(phi);
  }
  return path;
}

namespace detail {

/// Composite Simpson's rule on a non-uniform grid. An odd trailing interval
/// gets the three-point end correction; a single interval falls back to the
/// trapezoid rule.
inline double simpson_nonuniform(const std::vector<double>& t, const std::vector<double>& f) {
  const std::size_t n = t.size() - 1;  // intervals
  if (n == 0) return 0.0;
  if (n == 1) return 0.5 * (t[1] - t[0]) * (f[0] + f[1]);
  double sum = 0.0;
  const std::size_t even = n - (n % 2);
  for (std::size_t i = 0; i + 2 <= even; i += 2) {
    const double h0 = t[i + 1] - t[i], h1 = t[i + 2] - t[i + 1];
    const double hs = h0 + h1;
    sum += hs / 6.0 *
           (f[i] * (2.0 - h1 / h0) + f[i + 1] * hs * hs / (h0 * h1) + f[i + 2] * (2.0 - h0 / h1));
  }
  if (n % 2 == 1) {
    const double h0 = t[n - 1] - t[n - 2], h1 = t[n] - t[n - 1];
    const double alpha = (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1));
    const double beta = (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0);
    const double eta = h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
    sum += alpha * f[n] + beta * f[n - 1] - eta * f[n - 2];
  }
  return sum;
}

}  // namespace detail

/// Game cost of a state path up to horizon T.
///
/// The path must come from integrate_state_ode under the same psi'. If the
/// path was cut at t_max < T without reaching a, the running cost stops at
/// the end of the path. The ruin indicator compares tau and T with a relative
/// tolerance of 1e-9, since both are usually computed numerically.
template <class PathRate>
GameCost game_cost(const Problem& p, const PathRate& psi_dot, double T, const StatePath& path) {
  if (!(T >= 0)) throw std::domain_error("game cost horizon T must be non-negative");
  const auto& m = p.market;
  const double end = std::min({T, path.tau.value_or(path.times.back()), path.times.back()});

  std::vector<double> ts, fs;
  const auto integrand = [&](double t, double phi) {
    const double rate = psi_dot(t);
    return -m.lambda + p.l(std::max(phi, m.a)) - 0.5 * rate * rate;
  };
  for (std::size_t i = 0; i < path.times.size() && path.times[i] < end; ++i) {
    ts.push_back(path.times[i]);
    fs.push_back(integrand(path.times[i], path.values[i]));
  }
  if (end > 0) {
    // Endpoint state by linear interpolation when T falls inside a step.
    const auto it = std::lower_bound(path.times.begin(), path.times.end(), end);
    const auto j = static_cast<std::size_t>(it - path.times.begin());
    double phi_end = path.values[j];
    if (path.times[j] != end) {
      const double w = (end - path.times[j - 1]) / (path.times[j] - path.times[j - 1]);
      phi_end = path.values[j - 1] + w * (path.values[j] - path.values[j - 1]);
    }
    ts.push_back(end);
    fs.push_back(integrand(end, phi_end));
    // A sliver final interval makes the non-uniform weights cancel badly;
    // fold it into its neighbour.
    const std::size_t n = ts.size() - 1;
    if (n >= 2 && ts[n] - ts[n - 1] < 1e-3 * (ts[n - 1] - ts[n - 2])) {
      ts.erase(ts.begin() + static_cast<std::ptrdiff_t>(n - 1));
      fs.erase(fs.begin() + static_cast<std::ptrdiff_t>(n - 1));
    }
  }

  GameCost out;
  out.running = ts.size() >= 2 ? detail::simpson_nonuniform(ts, fs) : 0.0;
  out.terminal = (path.tau && *path.tau <= T + 1e-9 * std::max(1.0, T)) ? m.rho : 0.0;
  out.total = out.running + out.terminal;
  return out;
}

}  // namespace ruingame
