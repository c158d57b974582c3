#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ruingame/errors.hpp"
#include "ruingame/game.hpp"
#include "ruingame/parallel.hpp"
#include "ruingame/rng.hpp"

namespace ruingame {

enum class Estimator { sampled_death, integrated_death, tilted };

inline std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::sampled_death: return "sampled-death";
    case Estimator::integrated_death: return "integrated-death";
    case Estimator::tilted: return "tilted";
  }
  return "?";
}

inline Estimator estimator_from_string(std::string_view s) {
  if (s == "sampled-death") return Estimator::sampled_death;
  if (s == "integrated-death") return Estimator::integrated_death;
  if (s == "tilted") return Estimator::tilted;
  throw std::invalid_argument("unknown estimator '" + std::string(s) + "'");
}

struct SimConfig {
  int n = 1;                     ///< scaling parameter
  double dt = 1e-3;              ///< Euler step
  std::size_t paths = 1;
  std::uint64_t seed = 0;
  std::optional<double> t_max;   ///< truncation horizon; default 2 rho / (lambda - l(a))
  Estimator estimator = Estimator::tilted;
  std::size_t workers = 0;       ///< 0: RUINGAME_WORKERS or 1

  void validate() const {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
    if (paths < 1) throw std::invalid_argument("paths must be >= 1");
    if (t_max && !(*t_max > 0)) throw std::invalid_argument("t_max must be positive");
  }
};

/// Horizon 2 rho / (lambda - l(a)).
inline double default_t_max(const Problem& p) {
  return 2.0 * p.market.rho / (p.market.lambda - p.l(p.market.a));
}

inline double resolved_t_max(const SimConfig& cfg, const Problem& p) {
  return cfg.t_max.value_or(default_t_max(p));
}

struct PathOutcome {
  std::optional<double> tau_a;  ///< hitting time of a (grid-interpolated)
  double running_penalty = 0.0; ///< int_0^stop l(W) ds, trapezoid on the step grid
  /// Sampled death: n (L(tau_a ^ tau_d) + rho 1{tau_a <= tau_d}).
  /// Integrated death: log of the death-integrated conditional expectation.
  double terminal_exponent = 0.0;
  double log_weight = 0.0;      ///< log dP/dQ along the path; 0 when untilted
  /// log of the bound on the mass cut off at t_max (-inf when the path hit a).
  double log_tail_bound = -std::numeric_limits<double>::infinity();
  bool truncated = false;       ///< reached t_max alive without ruin
  bool faulted = false;
  std::uint64_t steps = 0;
};

struct SimEstimate {
  double j_hat = 0.0;
  double std_err = 0.0;
  double hit_fraction = 0.0;
  double ess = 0.0;
  Estimator estimator = Estimator::tilted;
  std::size_t paths = 0;
  std::size_t faulted_paths = 0;
  /// Truncated mass relative to the estimate (integrated-death forms).
  double tail_ratio = 0.0;
  bool tail_warning = false;
};

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double unit_uniform(CounterRng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double log_add_exp(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity()) return y;
  if (y == -std::numeric_limits<double>::infinity()) return x;
  const double hi = std::max(x, y), lo = std::min(x, y);
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace detail

/// Simulates one path of the scaled wealth SDE
///   dW = (-e(W) + (mu - r) pi(W) + sigma pi(W) tilt) dt + sigma pi(W) / sqrt(n) dB
/// by Euler-Maruyama, with B drawn from the counter stream (seed, path_index).
///
/// With tilt != 0 the path is drawn under the tilted measure and log dP/dQ is
/// accumulated as -sqrt(n) tilt dB - n tilt^2 dt / 2 per step, which is the
/// exact likelihood ratio of the discretised increments.
///
/// A step ending at or below a is cut where the linear interpolant meets a.
/// A step ending above a still counts as a crossing with the Brownian-bridge
/// probability for its frozen volatility, which removes the discrete
/// monitoring bias of order sqrt(dt).
/// The per-path exponent follows cfg.estimator: sampled-death draws
/// tau_d ~ Exp(lambda n) first from the same stream; the other kinds integrate
/// the death time out in closed form per step, holding l at its trapezoid
/// average over the step. A path alive at t_max contributes its
/// survival mass exp(-lambda n t_max + n L(t_max)) as a death without ruin.
template <class Policy>
PathOutcome simulate_path(const Problem& p, const Policy& pi, const SimConfig& cfg, double x,
                          std::uint64_t path_index, double drift_tilt) {
  const auto& m = p.market;
  const double a = m.a;
  detail::require_in_domain(x, a);

  const double n = static_cast<double>(cfg.n);
  const double sqrt_n = std::sqrt(n);
  const double lam_n = m.lambda * n;
  const double t_max = resolved_t_max(cfg, p);
  const bool sampled = cfg.estimator == Estimator::sampled_death;

  CounterRng rng(cfg.seed, path_index);
  std::normal_distribution<double> normal;
  double tau_d = std::numeric_limits<double>::infinity();
  if (sampled) tau_d = std::exponential_distribution<double>(lam_n)(rng);

  PathOutcome out;
  if (x <= a) {
    out.tau_a = 0.0;
    out.terminal_exponent = n * m.rho;
    return out;
  }

  double w = x, t = 0.0, L = 0.0;
  double l_w = p.l(w);
  const double tilt_cost = 0.5 * n * drift_tilt * drift_tilt;
  // Integrated death: s = -lambda n t + n L(t) only decreases (l < lambda), so
  // the pre-ruin death mass is accumulated in the linear domain from
  // survival = exp(s); only the ruin term needs logs.
  double s = 0.0, survival = 1.0, death_mass = 0.0;
  double last_decay = -1.0, last_factor = 1.0;
  while (t < t_max) {
    const double h = std::min(cfg.dt, t_max - t);
    const double inv = pi(w);
    const double drift = -p.e(w) + (m.mu - m.r) * inv + m.sigma * inv * drift_tilt;
    const double db = std::sqrt(h) * normal(rng);
    const double w_next = w + drift * h + m.sigma * inv / sqrt_n * db;
    ++out.steps;
    if (drift_tilt != 0.0) out.log_weight += -sqrt_n * drift_tilt * db - tilt_cost * h;
    if (!std::isfinite(w_next) || !std::isfinite(out.log_weight)) {
      out.faulted = true;
      return out;
    }

    bool crossed = w_next <= a;
    double frac = crossed ? (w - a) / (w - w_next) : 1.0;
    const double vol = m.sigma * inv / sqrt_n;
    if (!crossed && vol != 0.0) {
      // Brownian bridge between two points above a hits a with probability
      // exp(-2 (w - a)(w_next - a) / (vol^2 h)); the crossing is put mid-step.
      const double arg = 2.0 * (w - a) * (w_next - a) / (vol * vol * h);
      if (arg < 40.0 && detail::unit_uniform(rng) < std::exp(-arg)) {
        crossed = true;
        frac = 0.5;
      }
    }
    const double step_end = t + frac * h;

    if (sampled && tau_d < step_end) {
      const double dur = tau_d - t;
      const double w_d = w + (w_next - w) * (dur / h);
      L += 0.5 * dur * (l_w + p.l(std::max(w_d, a)));
      out.running_penalty = L;
      out.terminal_exponent = n * L;
      return out;
    }

    const double l_next = crossed ? p.l(a) : p.l(w_next);
    const double l_bar = 0.5 * (l_w + l_next);
    const double dur = frac * h;
    if (!sampled) {
      // int over the step of lambda n e^{-lambda n u} e^{n L(u)} du with l = l_bar
      const double gap = m.lambda - l_bar;
      const double decay = n * gap * dur;
      if (decay != last_decay) {
        last_decay = decay;
        last_factor = std::exp(-decay);
      }
      const double next_survival = survival * last_factor;
      death_mass += m.lambda / gap * (survival - next_survival);
      survival = next_survival;
      s -= decay;
    }
    L += l_bar * dur;
    t = step_end;

    if (crossed) {
      out.tau_a = t;
      out.running_penalty = L;
      // The death-integrated mass is >= 1 exactly; clamp the round-off.
      out.terminal_exponent =
          sampled ? n * (L + m.rho)
                  : std::max(0.0, detail::log_add_exp(std::log(death_mass), s + n * m.rho));
      return out;
    }
    w = w_next;
    l_w = l_next;
  }

  out.truncated = true;
  out.running_penalty = L;
  if (sampled) {
    out.terminal_exponent = n * L;
  } else {
    out.terminal_exponent = std::max(0.0, detail::log_add_exp(std::log(death_mass), s));
    out.log_tail_bound = -n * (m.lambda - p.l(a)) * t_max + n * m.rho;
  }
  return out;
}

/// Monte Carlo estimate of J^n(x, pi) = (1/n) ln E[exp(n(int l + rho 1{ruin}))].
///
/// Paths are simulated in parallel into an index-ordered buffer and reduced
/// in ascending path order, so the result is bit-identical for any worker
/// count. Aggregation is in the log domain; std_err is the delta-method error
/// of (1/n) ln(mean).
template <class Policy>
SimEstimate estimate_jn(const Problem& p, const Policy& pi, const SimConfig& cfg, double x) {
  cfg.validate();
  detail::require_in_domain(x, p.market.a);
  const double tilt = cfg.estimator == Estimator::tilted ? -p.market.theta() : 0.0;

  std::vector<PathOutcome> outcomes(cfg.paths);
  parallel_for(cfg.paths, resolve_workers(cfg.workers), [&](std::size_t i) {
    outcomes[i] = simulate_path(p, pi, cfg, x, static_cast<std::uint64_t>(i), tilt);
  });

  SimEstimate est;
  est.estimator = cfg.estimator;
  est.paths = cfg.paths;
  double top = -std::numeric_limits<double>::infinity();
  std::size_t valid = 0, hits = 0;
  for (const auto& o : outcomes) {
    if (o.faulted) {
      ++est.faulted_paths;
      continue;
    }
    ++valid;
    if (o.tau_a) ++hits;
    top = std::max(top, o.terminal_exponent + o.log_weight);
  }
  if (valid == 0) throw NumericalFault("every Monte Carlo path faulted");

  double s1 = 0.0, s2 = 0.0, tail = 0.0;
  for (const auto& o : outcomes) {
    if (o.faulted) continue;
    const double y = std::exp(o.terminal_exponent + o.log_weight - top);
    s1 += y;
    s2 += y * y;
    if (o.truncated) tail += std::exp(o.log_tail_bound + o.log_weight - top);
  }
  const double count = static_cast<double>(valid);
  const double mean = s1 / count;
  const double n = static_cast<double>(cfg.n);
  est.j_hat = (top + std::log(mean)) / n;
  if (valid > 1) {
    const double var = std::max(0.0, (s2 - count * mean * mean) / (count - 1.0));
    est.std_err = std::sqrt(var / count) / (mean * n);
  } else {
    est.std_err = std::numeric_limits<double>::infinity();
  }
  est.ess = s1 * s1 / s2;
  est.hit_fraction = static_cast<double>(hits) / count;
  est.tail_ratio = tail / s1;
  est.tail_warning = est.tail_ratio > 1e-3;
  return est;
}

struct SweepRow {
  int n = 0;
  SimEstimate estimate;
  double u_ref = 0.0;
  double gap = 0.0;  ///< |j_hat - U(x)|
};

/// estimate_jn for each n in n_list with dt = dt0 / sqrt(n), plus the gap to U(x).
template <class Policy>
std::vector<SweepRow> convergence_sweep(const GameSolution& sol, const Policy& pi,
                                        const SimConfig& base, double x,
                                        const std::vector<int>& n_list) {
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (!(n_list[i] > n_list[i - 1]))
      throw std::invalid_argument("n_list must be strictly increasing");
  const double u = sol.value(x);
  std::vector<SweepRow> rows;
  rows.reserve(n_list.size());
  for (int n : n_list) {
    SimConfig cfg = base;
    cfg.n = n;
    cfg.dt = base.dt / std::sqrt(static_cast<double>(n));
    SweepRow row;
    row.n = n;
    row.estimate = estimate_jn(sol.problem(), pi, cfg, x);
    row.u_ref = u;
    row.gap = std::abs(row.estimate.j_hat - u);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ruingame
