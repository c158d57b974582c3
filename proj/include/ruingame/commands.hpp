#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ruingame/csv.hpp"
#include "ruingame/game.hpp"
#include "ruingame/grid_game.hpp"
#include "ruingame/hjb.hpp"
#include "ruingame/manifest.hpp"
#include "ruingame/policy.hpp"
#include "ruingame/run_config.hpp"
#include "ruingame/saddle.hpp"
#include "ruingame/sde_engine.hpp"
#include "ruingame/state_ode.hpp"
#include "ruingame/validation.hpp"

namespace ruingame {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int validation = 1;
inline constexpr int numerical = 2;
inline constexpr int breach = 3;
}  // namespace exit_code

inline constexpr std::string_view kCommands[] = {"value",    "hjb-check",   "game-cost",
                                                 "simulate", "convergence", "validate"};

struct CommandOptions {
  std::string out_dir;      ///< overrides the config's output_dir when set
  std::size_t workers = 0;  ///< overrides RUINGAME_WORKERS when > 0
  std::ostream* err = &std::cerr;
};

/// Files written by one command, checksummed into manifest.json.
class OutputSet {
 public:
  OutputSet(std::filesystem::path dir, std::string command, std::string config_hash)
      : dir_(std::move(dir)), started_(std::chrono::system_clock::now()) {
    manifest_.command = std::move(command);
    manifest_.config_hash = std::move(config_hash);
    manifest_.started_utc = utc_timestamp(started_);
    std::filesystem::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    manifest_.tables[name] = sha256_hex(content);
  }

  void write(const std::string& name, const CsvTable& table) { write(name, table.str()); }
  void write(const std::string& name, const json& doc) { write(name, doc.dump(2) + "\n"); }

  void finish() {
    manifest_.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::system_clock::now() - started_).count();
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << manifest_.to_json().dump(2) << '\n';
  }

  const RunManifest& manifest() const noexcept { return manifest_; }

 private:
  std::filesystem::path dir_;
  std::chrono::system_clock::time_point started_;
  RunManifest manifest_;
};

namespace detail {

inline json level_json(const Level& l) {
  if (l.is_finite()) return l.value();
  return "inf";
}

inline json estimate_json(const SimEstimate& e) {
  return {{"estimator", std::string(to_string(e.estimator))},
          {"j_hat", e.j_hat},
          {"std_err", e.std_err},
          {"hit_fraction", e.hit_fraction},
          {"ess", e.ess},
          {"paths", e.paths},
          {"faulted_paths", e.faulted_paths},
          {"tail_ratio", e.tail_ratio},
          {"tail_warning", e.tail_warning}};
}

inline void add_sim_row(CsvTable& t, int n, double x, const SimEstimate& e, double u_ref) {
  t.add_row({static_cast<long long>(n), std::string(to_string(e.estimator)), x, e.j_hat,
             e.std_err, e.hit_fraction, e.ess, static_cast<long long>(e.faulted_paths), u_ref,
             std::abs(e.j_hat - u_ref), static_cast<long long>(e.tail_warning)});
}

inline CsvTable sim_table() {
  return CsvTable({"n", "estimator", "x", "j_hat", "std_err", "hit_fraction", "ess",
                   "faulted_paths", "U_ref", "gap", "tail_warning"});
}

inline double require_x(const RunConfig& cfg) {
  if (!cfg.x) throw ConfigError("config needs 'x'");
  return *cfg.x;
}

/// Grid-game options from the oracle block; x_max falls back to the x_grid end.
inline GridGameOptions oracle_options(const RunConfig& cfg, const GameSolution& sol) {
  const auto& o = *cfg.oracle;
  GridGameOptions opt;
  if (o.x_max)
    opt.x_max = *o.x_max;
  else if (cfg.x_grid)
    opt.x_max = cfg.x_grid->hi;
  else
    throw ConfigError("oracle needs x_max or an x_grid");
  opt.h_x = o.h_x;
  opt.h_t = o.h_t;
  opt.margin = o.margin;
  opt.max_sweeps = o.max_sweeps;
  default_control_grids(sol, opt, o.p_points, o.theta_points);
  return opt;
}

inline void warn_tail(std::ostream& err, int n, const SimEstimate& e) {
  if (e.tail_warning)
    err << "warning: n=" << n << ": truncated tail mass is " << e.tail_ratio
        << " of the estimate (t_max too short)\n";
  if (e.faulted_paths > 0)
    err << "warning: n=" << n << ": " << e.faulted_paths << " paths faulted and were excluded\n";
}

}  // namespace detail

inline int cmd_value(const RunConfig& cfg, OutputSet& out, std::ostream& err) {
  if (!cfg.x_grid) throw ConfigError("value needs an x_grid");
  const auto xs = cfg.x_grid->points();
  if (xs.empty()) throw ConfigError("x_grid is empty");

  const GameSolution sol(cfg.problem);
  CsvTable table({"x", "U", "pi_star"});
  for (double x : xs) table.add_row({x, sol.value(x), sol.pi_star(x)});
  out.write("value.csv", table);

  const auto& m = cfg.problem.market;
  json summary = {{"b", detail::level_json(sol.b())},
                  {"d", detail::level_json(sol.d())},
                  {"theta", m.theta()},
                  {"M1", sol.m1()},
                  {"quadrature_warning", sol.quadrature_warning()}};
  if (sol.quadrature_warning())
    err << "warning: quadrature did not reach tolerance while locating d\n";

  int status = exit_code::ok;
  if (cfg.oracle) {
    const auto grid = grid_game_value(sol, detail::oracle_options(cfg, sol));
    CsvTable oracle({"x", "U_closed_form", "U_grid", "abs_err"});
    double max_err = 0.0;
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
      const double u = sol.value(grid.x[i]);
      const double err_i = std::abs(u - grid.value[i]);
      max_err = std::max(max_err, err_i);
      oracle.add_row({grid.x[i], u, grid.value[i], err_i});
    }
    out.write("oracle.csv", oracle);
    summary["oracle"] = {{"max_abs_err", max_err}, {"sweeps", grid.sweeps}};
    if (cfg.oracle->threshold) {
      summary["oracle"]["threshold"] = *cfg.oracle->threshold;
      if (!(max_err < *cfg.oracle->threshold)) {
        err << "oracle max abs error " << max_err << " exceeds threshold "
            << *cfg.oracle->threshold << '\n';
        status = exit_code::breach;
      }
    }
  }
  out.write("summary.json", summary);
  return status;
}

inline int cmd_hjb_check(const RunConfig& cfg, OutputSet& out, std::ostream& err) {
  const GameSolution sol(cfg.problem);
  const auto& m = cfg.problem.market;
  double top;
  if (sol.d().is_finite())
    top = sol.d().value();
  else if (cfg.x_grid)
    top = cfg.x_grid->hi;
  else
    throw ConfigError("d is infinite; hjb-check needs an x_grid to bound the interior");
  const double lo = m.a + 1e-3, hi = top - 1e-3;
  if (!(hi > lo)) throw ConfigError("interior (a, d) is too narrow for hjb-check");

  const double slope = cfg.hjb.perturbation;
  const auto v = [&](double x) { return sol.value(x) + slope * (x - m.a); };
  const int n = cfg.hjb.points;
  CsvTable table({"x", "residual"});
  double worst = 0.0;
  bool breach = false;
  for (int i = 0; i < n; ++i) {
    const double x = n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1);
    const auto r = hjb_residual(cfg.problem, v, x, cfg.hjb.h);
    table.add_row({x, r.residual});
    worst = std::max(worst, std::abs(r.residual));
    if (r.flagged || !(std::abs(r.residual) < cfg.hjb.threshold)) breach = true;
  }
  out.write("hjb.csv", table);
  out.write("summary.json", json{{"max_abs_residual", worst},
                                 {"threshold", cfg.hjb.threshold},
                                 {"points", n},
                                 {"passed", !breach}});
  if (breach) {
    err << "HJB residual " << worst << " breaches threshold " << cfg.hjb.threshold << '\n';
    return exit_code::breach;
  }
  return exit_code::ok;
}

inline int cmd_game_cost(const RunConfig& cfg, OutputSet& out, std::ostream&) {
  std::vector<double> xs = cfg.x_list;
  if (xs.empty()) xs.push_back(detail::require_x(cfg));

  const GameSolution sol(cfg.problem);
  const std::vector<std::pair<std::string, FeedbackPolicy>> policies = {
      {"pi_star", FeedbackPolicy::optimal()},
      {"zero", FeedbackPolicy::zero()},
      {"constant", FeedbackPolicy::constant(cfg.saddle.constant_policy)}};

  CsvTable table({"x", "policy", "cost", "U_ref", "abs_gap"});
  json per_x = json::array();
  double worst = 0.0;
  for (double x : xs) {
    const auto sc = saddle_controls(sol, x);
    const auto psi = [&](double) { return sc.psi_dot; };
    const double u = sol.value(x);
    const double t_max = sc.t_star > 0 ? sc.t_star + cfg.saddle.dt : 0.0;
    for (const auto& [label, spec] : policies) {
      const PolicyFunction pi(spec, sol);
      const auto path = integrate_state_ode(cfg.problem, pi, psi, x, t_max, cfg.saddle.dt);
      const auto cost = game_cost(cfg.problem, psi, sc.t_star, path);
      const double gap = std::abs(cost.total - u);
      worst = std::max(worst, gap);
      table.add_row({x, label, cost.total, u, gap});
    }
    per_x.push_back({{"x", x},
                     {"psi_dot", sc.psi_dot},
                     {"T_star", sc.t_star},
                     {"bound", sc.bound},
                     {"bound_holds", sc.bound_holds}});
  }
  out.write("saddle.csv", table);
  out.write("summary.json", json{{"max_abs_gap", worst}, {"saddle", per_x}});
  return exit_code::ok;
}

inline int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt, OutputSet& out,
                        std::ostream& err) {
  const double x = detail::require_x(cfg);
  const GameSolution sol(cfg.problem);
  const PolicyFunction pi(cfg.policy, sol);
  if (!pi.within_bound()) throw ConfigError("policy exceeds its declared bound m1");
  SimConfig sim = cfg.sim;
  if (opt.workers > 0) sim.workers = opt.workers;

  const auto est = estimate_jn(cfg.problem, pi, sim, x);
  const double u = sol.value(x);
  auto table = detail::sim_table();
  detail::add_sim_row(table, sim.n, x, est, u);
  detail::warn_tail(err, sim.n, est);
  out.write("sim.csv", table);
  auto summary = detail::estimate_json(est);
  summary["t_max"] = resolved_t_max(sim, cfg.problem);
  summary["U_ref"] = u;
  out.write("summary.json", summary);
  return exit_code::ok;
}

inline int cmd_convergence(const RunConfig& cfg, const CommandOptions& opt, OutputSet& out,
                           std::ostream& err) {
  const double x = detail::require_x(cfg);
  if (cfg.n_list.empty()) throw ConfigError("convergence needs a non-empty n_list");
  const GameSolution sol(cfg.problem);
  const PolicyFunction pi(cfg.policy, sol);
  if (!pi.within_bound()) throw ConfigError("policy exceeds its declared bound m1");
  SimConfig sim = cfg.sim;
  if (opt.workers > 0) sim.workers = opt.workers;

  const auto rows = convergence_sweep(sol, pi, sim, x, cfg.n_list);
  auto table = detail::sim_table();
  bool non_increasing = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    detail::add_sim_row(table, r.n, x, r.estimate, r.u_ref);
    detail::warn_tail(err, r.n, r.estimate);
    if (i > 0) {
      const auto& prev = rows[i - 1];
      const double se = std::hypot(prev.estimate.std_err, r.estimate.std_err);
      if (r.gap > prev.gap + 3.0 * se) non_increasing = false;
    }
  }
  out.write("sim.csv", table);
  out.write("summary.json",
            json{{"U_ref", sol.value(x)}, {"gap_non_increasing_within_3se", non_increasing}});
  return exit_code::ok;
}

/// Dispatches one subcommand and maps failures onto exit codes.
inline int run_command(std::string_view command, const RunConfig& cfg,
                       const CommandOptions& opt = {}) {
  std::ostream& err = *opt.err;
  try {
    const auto report = validate_problem(cfg.problem);
    if (command == "validate") {
      err << report.to_string();
      return report.ok() ? exit_code::ok : exit_code::validation;
    }
    if (!report.ok()) {
      err << report.to_string();
      return exit_code::validation;
    }
    const std::string dir =
        !opt.out_dir.empty() ? opt.out_dir : (!cfg.output_dir.empty() ? cfg.output_dir : ".");
    OutputSet out(dir, std::string(command), cfg.hash());
    int status;
    if (command == "value")
      status = cmd_value(cfg, out, err);
    else if (command == "hjb-check")
      status = cmd_hjb_check(cfg, out, err);
    else if (command == "game-cost")
      status = cmd_game_cost(cfg, out, err);
    else if (command == "simulate")
      status = cmd_simulate(cfg, opt, out, err);
    else if (command == "convergence")
      status = cmd_convergence(cfg, opt, out, err);
    else
      throw ConfigError("unknown command '" + std::string(command) + "'");
    out.finish();
    return status;
  } catch (const NumericalFault& ex) {
    err << "numerical fault: " << ex.what();
    if (ex.last_time()) err << " (t=" << *ex.last_time() << ")";
    if (ex.last_state()) err << " (state=" << *ex.last_state() << ")";
    err << '\n';
    return exit_code::numerical;
  } catch (const ConfigError& ex) {
    err << "config error: " << ex.what() << '\n';
    return exit_code::validation;
  } catch (const std::invalid_argument& ex) {
    err << "invalid input: " << ex.what() << '\n';
    return exit_code::validation;
  } catch (const std::domain_error& ex) {
    err << "domain error: " << ex.what() << '\n';
    return exit_code::validation;
  }
}

}  // namespace ruingame
