#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ruingame/config.hpp"
#include "ruingame/manifest.hpp"

namespace ruingame {

/// Evenly spaced wealth grid lo, lo + step, ... up to hi.
struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;

  std::vector<double> points() const {
    std::vector<double> out;
    if (!(step > 0) || !(hi >= lo)) return out;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
  }
};

struct HjbOptions {
  int points = 100;
  double h = 1e-5;
  double threshold = 1e-5;
  double perturbation = 0.0;  ///< checks U + perturbation (x - a) instead of U
};

struct SaddleOptions {
  double constant_policy = 1.0;
  double dt = 1e-3;
};

struct OracleOptions {
  std::optional<double> x_max;  ///< defaults to the x_grid upper end
  double h_x = 0.01;
  double h_t = 0.01;
  std::size_t p_points = 133;
  std::size_t theta_points = 61;
  double margin = 0.1;
  int max_sweeps = 100'000;
  std::optional<double> threshold;  ///< max abs error allowed; unchecked when absent
};

/// Everything one CLI invocation needs, parsed from a single JSON document.
struct RunConfig {
  json source;
  Problem problem;
  FeedbackPolicy policy;
  SimConfig sim;
  std::optional<double> x;
  std::vector<double> x_list;
  std::optional<GridSpec> x_grid;
  std::vector<int> n_list;
  HjbOptions hjb;
  SaddleOptions saddle;
  std::optional<OracleOptions> oracle;
  std::string output_dir;

  /// SHA-256 of the canonical (key-sorted, compact) config document.
  std::string hash() const { return sha256_hex(source.dump()); }
};

namespace detail {

inline GridSpec parse_grid(const json& j) {
  constexpr std::string_view what = "x_grid";
  require_object(j, what);
  reject_unknown_keys(j, what, {"lo", "hi", "step"});
  return {number(j, "lo", what), number(j, "hi", what), number(j, "step", what)};
}

inline HjbOptions parse_hjb(const json& j) {
  constexpr std::string_view what = "hjb";
  require_object(j, what);
  reject_unknown_keys(j, what, {"points", "h", "threshold", "perturbation"});
  HjbOptions o;
  if (j.contains("points")) {
    if (!j.at("points").is_number_integer() || j.at("points").get<int>() < 1)
      throw ConfigError("hjb.points must be a positive integer");
    o.points = j.at("points").get<int>();
  }
  o.h = number_or(j, "h", o.h, what);
  o.threshold = number_or(j, "threshold", o.threshold, what);
  o.perturbation = number_or(j, "perturbation", o.perturbation, what);
  if (!(o.h > 0)) throw ConfigError("hjb.h must be positive");
  if (!(o.threshold >= 0)) throw ConfigError("hjb.threshold must be non-negative");
  return o;
}

inline SaddleOptions parse_saddle(const json& j) {
  constexpr std::string_view what = "saddle";
  require_object(j, what);
  reject_unknown_keys(j, what, {"constant_policy", "dt"});
  SaddleOptions o;
  o.constant_policy = number_or(j, "constant_policy", o.constant_policy, what);
  o.dt = number_or(j, "dt", o.dt, what);
  if (!(o.dt > 0)) throw ConfigError("saddle.dt must be positive");
  return o;
}

inline OracleOptions parse_oracle(const json& j) {
  constexpr std::string_view what = "oracle";
  require_object(j, what);
  reject_unknown_keys(j, what,
                      {"x_max", "h_x", "h_t", "p_points", "theta_points", "margin", "max_sweeps",
                       "threshold"});
  OracleOptions o;
  if (j.contains("x_max")) o.x_max = number(j, "x_max", what);
  o.h_x = number_or(j, "h_x", o.h_x, what);
  o.h_t = number_or(j, "h_t", o.h_t, what);
  o.margin = number_or(j, "margin", o.margin, what);
  for (const char* key : {"p_points", "theta_points"}) {
    if (!j.contains(key)) continue;
    if (!j.at(key).is_number_integer() || j.at(key).get<long long>() < 2)
      throw ConfigError(std::string("oracle.") + key + " must be an integer >= 2");
    (std::string_view(key) == "p_points" ? o.p_points : o.theta_points) =
        j.at(key).get<std::size_t>();
  }
  if (j.contains("max_sweeps")) {
    if (!j.at("max_sweeps").is_number_integer() || j.at("max_sweeps").get<long long>() < 1)
      throw ConfigError("oracle.max_sweeps must be a positive integer");
    o.max_sweeps = j.at("max_sweeps").get<int>();
  }
  if (j.contains("threshold")) o.threshold = number(j, "threshold", what);
  if (!(o.h_x > 0) || !(o.h_t > 0)) throw ConfigError("oracle steps must be positive");
  return o;
}

}  // namespace detail

inline RunConfig parse_run_config(const json& j) {
  detail::require_object(j, "config");
  detail::reject_unknown_keys(j, "config",
                              {"market", "e", "l", "policy", "sim", "x", "x_list", "x_grid",
                               "n_list", "hjb", "saddle", "oracle", "output_dir"});
  RunConfig c;
  c.source = j;
  c.problem = parse_problem(j);
  if (j.contains("policy")) c.policy = parse_policy(j.at("policy"));
  if (j.contains("sim")) c.sim = parse_sim(j.at("sim"));
  if (j.contains("x")) c.x = detail::number(j, "x", "config");
  if (j.contains("x_list")) c.x_list = detail::number_list(j, "x_list", "config");
  if (j.contains("x_grid")) c.x_grid = detail::parse_grid(j.at("x_grid"));
  if (j.contains("n_list")) {
    if (!j.at("n_list").is_array()) throw ConfigError("n_list must be an array");
    for (const auto& v : j.at("n_list")) {
      if (!v.is_number_integer() || v.get<long long>() < 1)
        throw ConfigError("n_list entries must be positive integers");
      c.n_list.push_back(v.get<int>());
    }
  }
  if (j.contains("hjb")) c.hjb = detail::parse_hjb(j.at("hjb"));
  if (j.contains("saddle")) c.saddle = detail::parse_saddle(j.at("saddle"));
  if (j.contains("oracle")) c.oracle = detail::parse_oracle(j.at("oracle"));
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) throw ConfigError("output_dir must be a string");
    c.output_dir = j.at("output_dir").get<std::string>();
  }
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw ConfigError("invalid JSON in '" + path + "': " + ex.what());
  }
  return parse_run_config(j);
}

}  // namespace ruingame
