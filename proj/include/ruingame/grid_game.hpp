#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ruingame/errors.hpp"
#include "ruingame/game.hpp"

namespace ruingame {

struct GridGameOptions {
  double x_max = 0.0;
  double h_x = 0.01;  ///< wealth spacing
  double h_t = 0.01;  ///< time step of the discrete game
  std::vector<double> theta_grid;  ///< maximizer's path rates
  std::vector<double> p_grid;      ///< minimizer's investments
  double tol = 1e-8;               ///< sup-norm change between sweeps
  int max_sweeps = 100'000;
  double margin = 0.1;  ///< V = 0 is imposed on nodes x >= d + margin
};

struct GridGameTable {
  std::vector<double> x;
  std::vector<double> value;
  int sweeps = 0;
  double last_change = 0.0;

  /// Linear interpolation; rho below the first node, last value beyond.
  double operator()(double y, double rho) const {
    if (y <= x.front()) return y < x.front() ? rho : value.front();
    if (y >= x.back()) return value.back();
    const double h = x[1] - x[0];
    const auto i = std::min(static_cast<std::size_t>((y - x.front()) / h), x.size() - 2);
    const double w = (y - x[i]) / h;
    return value[i] + w * (value[i + 1] - value[i]);
  }
};

/// Grids spanning [0, 1.5 max pi*] and [-2 theta, 0] with the given counts.
inline void default_control_grids(const GameSolution& sol, GridGameOptions& opt,
                                  std::size_t p_points = 133, std::size_t theta_points = 61) {
  const double theta = sol.problem().market.theta();
  const double p_hi = 1.5 * sol.m1() / 1.1;
  opt.p_grid.resize(p_points);
  opt.theta_grid.resize(theta_points);
  for (std::size_t i = 0; i < p_points; ++i)
    opt.p_grid[i] = p_hi * static_cast<double>(i) / static_cast<double>(p_points - 1);
  for (std::size_t i = 0; i < theta_points; ++i)
    opt.theta_grid[i] =
        -2.0 * theta + 2.0 * theta * static_cast<double>(i) / static_cast<double>(theta_points - 1);
}

/// Discrete-time, discrete-state zero-sum stopping game solved by value
/// iteration:
///   V(a) = rho,
///   V(x) = max(0, min_p max_theta [h_t(-lambda + l(x) - theta^2/2)
///                                  + V(x + h_t(-e(x) + (mu - r)p + sigma p theta))]).
/// Values between nodes are linearly interpolated. Sweeps run in ascending
/// wealth order and update in place (Gauss-Seidel), so information from the
/// absorbing boundary at a crosses the grid in few sweeps. Independent of the
/// closed form except for the location of the imposed zero region.
inline GridGameTable grid_game_value(const GameSolution& sol, const GridGameOptions& opt) {
  const auto& p = sol.problem();
  const auto& m = p.market;
  if (!(opt.h_x > 0) || !(opt.h_t > 0)) throw std::invalid_argument("grid steps must be positive");
  if (!(opt.x_max > m.a)) throw std::invalid_argument("x_max must exceed a");
  if (opt.p_grid.empty() || opt.theta_grid.empty())
    throw std::invalid_argument("control grids must be non-empty");

  GridGameTable table;
  const auto nodes = static_cast<std::size_t>(std::floor((opt.x_max - m.a) / opt.h_x + 1e-9)) + 1;
  table.x.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) table.x[i] = m.a + opt.h_x * static_cast<double>(i);
  table.value.assign(nodes, 0.0);
  table.value[0] = m.rho;

  const double zero_from = sol.d().value_or(std::numeric_limits<double>::infinity()) + opt.margin;
  std::vector<double> running(nodes), drift(nodes);
  std::size_t free_end = nodes;
  for (std::size_t i = 0; i < nodes; ++i) {
    if (table.x[i] >= zero_from) {
      free_end = i;
      break;
    }
  }
  for (std::size_t i = 1; i < free_end; ++i) {
    running[i] = opt.h_t * (-m.lambda + p.l(table.x[i]));
    drift[i] = -p.e(table.x[i]);
  }

  const double excess = m.mu - m.r;
  for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    double change = 0.0;
    for (std::size_t i = 1; i < free_end; ++i) {
      const double x = table.x[i];
      double best = std::numeric_limits<double>::infinity();
      for (double inv : opt.p_grid) {
        double worst = -std::numeric_limits<double>::infinity();
        for (double th : opt.theta_grid) {
          const double y = x + opt.h_t * (drift[i] + excess * inv + m.sigma * inv * th);
          const double val = running[i] - 0.5 * opt.h_t * th * th + table(y, m.rho);
          worst = std::max(worst, val);
          if (worst >= best) break;  // this p cannot improve on the best so far
        }
        best = std::min(best, worst);
      }
      const double updated = std::max(0.0, best);
      change = std::max(change, std::abs(updated - table.value[i]));
      table.value[i] = updated;
    }
    table.sweeps = sweep;
    table.last_change = change;
    if (change < opt.tol) return table;
  }
  throw NumericalFault("grid game value iteration did not converge; last sup-norm change " +
                       std::to_string(table.last_change));
}

}  // namespace ruingame
