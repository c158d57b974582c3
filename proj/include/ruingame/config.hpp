#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ruingame/policy.hpp"
#include "ruingame/problem.hpp"
#include "ruingame/sde_engine.hpp"

namespace ruingame {

using json = nlohmann::json;

/// Malformed or inconsistent configuration document.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_object(const json& j, std::string_view what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
}

inline void reject_unknown_keys(const json& j, std::string_view what,
                                std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (auto k : allowed) known = known || key == k;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + std::string(what));
  }
}

inline double number(const json& j, const char* key, std::string_view what) {
  if (!j.contains(key)) throw ConfigError("missing key '" + std::string(key) + "' in " + std::string(what));
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError("'" + std::string(key) + "' in " + std::string(what) + " must be a number");
  return v.get<double>();
}

inline double number_or(const json& j, const char* key, double fallback, std::string_view what) {
  return j.contains(key) ? number(j, key, what) : fallback;
}

inline std::vector<double> number_list(const json& j, const char* key, std::string_view what) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw ConfigError("'" + std::string(key) + "' in " + std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ConfigError("non-numeric entry in '" + std::string(key) + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

// --- MarketParams -----------------------------------------------------------

inline json to_json(const MarketParams& m) {
  return {{"mu", m.mu}, {"r", m.r}, {"sigma", m.sigma},
          {"lambda", m.lambda}, {"rho", m.rho}, {"a", m.a}};
}

inline MarketParams parse_market(const json& j) {
  constexpr std::string_view what = "market";
  detail::require_object(j, what);
  detail::reject_unknown_keys(j, what, {"mu", "r", "sigma", "lambda", "rho", "a"});
  MarketParams m;
  m.mu = detail::number(j, "mu", what);
  m.r = detail::number(j, "r", what);
  m.sigma = detail::number(j, "sigma", what);
  m.lambda = detail::number(j, "lambda", what);
  m.rho = detail::number(j, "rho", what);
  m.a = detail::number(j, "a", what);
  return m;
}

// --- ScalarFunction ---------------------------------------------------------

inline json to_json(const ScalarFunction& f) {
  json j = std::visit(
      overloaded{
          [](const shape::Constant& c) -> json { return {{"kind", "constant"}, {"value", c.value}}; },
          [](const shape::Affine& a) -> json {
            return {{"kind", "affine"}, {"intercept", a.intercept}, {"slope", a.slope}};
          },
          [](const shape::PiecewiseLinear& p) -> json {
            return {{"kind", "piecewise-linear"}, {"breaks", p.breaks}, {"values", p.values}};
          },
          [](const shape::ExpDecay& e) -> json {
            return {{"kind", "exp-decay"}, {"amplitude", e.amplitude}, {"rate", e.rate},
                    {"offset", e.offset}};
          },
      },
      f.shape());
  j["domain_lo"] = f.domain_lo();
  return j;
}

/// Parses {kind, params..., domain_lo?}; domain_lo defaults to the ruin level.
inline ScalarFunction parse_function(const json& j, double default_lo, std::string_view what) {
  detail::require_object(j, what);
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError(std::string(what) + ".kind must be a string");
  const double lo = detail::number_or(j, "domain_lo", default_lo, what);
  FunctionKind kind;
  try {
    kind = function_kind_from_string(j.at("kind").get<std::string>());
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string(what) + ": " + ex.what());
  }
  try {
    switch (kind) {
      case FunctionKind::constant:
        detail::reject_unknown_keys(j, what, {"kind", "domain_lo", "value"});
        return ScalarFunction::constant(detail::number(j, "value", what), lo);
      case FunctionKind::affine:
        detail::reject_unknown_keys(j, what, {"kind", "domain_lo", "intercept", "slope"});
        return ScalarFunction::affine(detail::number(j, "intercept", what),
                                      detail::number(j, "slope", what), lo);
      case FunctionKind::piecewise_linear:
        detail::reject_unknown_keys(j, what, {"kind", "domain_lo", "breaks", "values"});
        return ScalarFunction::piecewise_linear(detail::number_list(j, "breaks", what),
                                                detail::number_list(j, "values", what), lo);
      case FunctionKind::exp_decay:
        detail::reject_unknown_keys(j, what, {"kind", "domain_lo", "amplitude", "rate", "offset"});
        return ScalarFunction::exp_decay(detail::number(j, "amplitude", what),
                                         detail::number(j, "rate", what),
                                         detail::number_or(j, "offset", 0.0, what), lo);
    }
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string(what) + ": " + ex.what());
  }
  throw ConfigError(std::string(what) + ": unsupported kind");
}

// --- FeedbackPolicy ---------------------------------------------------------

inline json to_json(const FeedbackPolicy& p) {
  json j = {{"kind", std::string(to_string(p.kind))}};
  if (p.kind == PolicyKind::constant) j["value"] = p.value;
  if (p.kind == PolicyKind::tabulated) {
    json rows = json::array();
    for (const auto& [x, v] : p.table) rows.push_back({x, v});
    j["table"] = rows;
  }
  if (p.m1) j["m1"] = *p.m1;
  return j;
}

inline FeedbackPolicy parse_policy(const json& j) {
  constexpr std::string_view what = "policy";
  detail::require_object(j, what);
  detail::reject_unknown_keys(j, what, {"kind", "value", "table", "m1"});
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError("policy.kind must be a string");
  FeedbackPolicy p;
  try {
    p.kind = policy_kind_from_string(j.at("kind").get<std::string>());
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("policy: ") + ex.what());
  }
  if (p.kind == PolicyKind::constant) p.value = detail::number(j, "value", what);
  if (p.kind == PolicyKind::tabulated) {
    if (!j.contains("table") || !j.at("table").is_array())
      throw ConfigError("policy.table must be an array of [x, pi] pairs");
    for (const auto& row : j.at("table")) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
        throw ConfigError("policy.table rows must be [x, pi] number pairs");
      p.table.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
  }
  if (j.contains("m1")) p.m1 = detail::number(j, "m1", what);
  return p;
}

// --- SimConfig --------------------------------------------------------------

inline json to_json(const SimConfig& c) {
  json j = {{"n", c.n},
            {"dt", c.dt},
            {"paths", c.paths},
            {"seed", c.seed},
            {"estimator", std::string(to_string(c.estimator))}};
  if (c.t_max) j["t_max"] = *c.t_max;
  return j;
}

inline SimConfig parse_sim(const json& j) {
  constexpr std::string_view what = "sim";
  detail::require_object(j, what);
  detail::reject_unknown_keys(j, what, {"n", "dt", "paths", "seed", "t_max", "estimator"});
  SimConfig c;
  const auto integer = [&](const char* key, auto fallback) {
    using T = decltype(fallback);
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) throw ConfigError(std::string("sim.") + key + " must be an integer");
    return j.at(key).get<T>();
  };
  c.n = integer("n", 1);
  c.paths = integer("paths", std::size_t{1});
  c.seed = integer("seed", std::uint64_t{0});
  c.dt = detail::number_or(j, "dt", 1e-3, what);
  if (j.contains("t_max")) c.t_max = detail::number(j, "t_max", what);
  if (j.contains("estimator")) {
    if (!j.at("estimator").is_string()) throw ConfigError("sim.estimator must be a string");
    try {
      c.estimator = estimator_from_string(j.at("estimator").get<std::string>());
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(std::string("sim: ") + ex.what());
    }
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("sim: ") + ex.what());
  }
  return c;
}

// --- Problem ----------------------------------------------------------------

inline json to_json(const Problem& p) {
  return {{"market", to_json(p.market)}, {"e", to_json(p.e)}, {"l", to_json(p.l)}};
}

/// Reads the market, e and l blocks of a config document.
inline Problem parse_problem(const json& j) {
  detail::require_object(j, "config");
  for (const char* key : {"market", "e", "l"})
    if (!j.contains(key)) throw ConfigError(std::string("missing '") + key + "' block");
  Problem p;
  p.market = parse_market(j.at("market"));
  p.e = parse_function(j.at("e"), p.market.a, "e");
  p.l = parse_function(j.at("l"), p.market.a, "l");
  return p;
}

}  // namespace ruingame
