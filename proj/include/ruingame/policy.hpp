#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ruingame/game.hpp"

namespace ruingame {

enum class PolicyKind { pi_star, zero, constant, tabulated };

inline std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::pi_star: return "pi_star";
    case PolicyKind::zero: return "zero";
    case PolicyKind::constant: return "constant";
    case PolicyKind::tabulated: return "tabulated";
  }
  return "?";
}

inline PolicyKind policy_kind_from_string(std::string_view s) {
  if (s == "pi_star") return PolicyKind::pi_star;
  if (s == "zero") return PolicyKind::zero;
  if (s == "constant") return PolicyKind::constant;
  if (s == "tabulated") return PolicyKind::tabulated;
  throw std::invalid_argument("unknown policy kind '" + std::string(s) + "'");
}

/// Serializable description of a wealth-to-investment feedback map.
struct FeedbackPolicy {
  PolicyKind kind = PolicyKind::pi_star;
  double value = 0.0;                             ///< constant kind
  std::vector<std::pair<double, double>> table;  ///< tabulated kind, sorted by x
  std::optional<double> m1;                       ///< bound on |pi|; derived when absent

  static FeedbackPolicy optimal() { return {}; }
  static FeedbackPolicy zero() { return {PolicyKind::zero, 0.0, {}, std::nullopt}; }
  static FeedbackPolicy constant(double v) { return {PolicyKind::constant, v, {}, std::nullopt}; }

  friend bool operator==(const FeedbackPolicy&, const FeedbackPolicy&) = default;
};

/// Evaluator for a FeedbackPolicy bound to a solved game (needed by pi_star).
class PolicyFunction {
 public:
  PolicyFunction(FeedbackPolicy spec, const GameSolution& sol)
      : spec_(std::move(spec)), a_(sol.problem().market.a) {
    if (spec_.kind == PolicyKind::pi_star) sol_.emplace(sol);
    if (spec_.kind == PolicyKind::tabulated) {
      if (spec_.table.empty()) throw std::invalid_argument("tabulated policy needs a table");
      for (std::size_t i = 1; i < spec_.table.size(); ++i)
        if (!(spec_.table[i].first > spec_.table[i - 1].first))
          throw std::invalid_argument("tabulated policy x values must be strictly increasing");
    }
    bound_ = spec_.m1 ? *spec_.m1 : natural_bound(sol);
  }

  double operator()(double x) const {
    switch (spec_.kind) {
      case PolicyKind::pi_star: return sol_->pi_star(x);
      case PolicyKind::zero: return 0.0;
      case PolicyKind::constant: return spec_.value;
      case PolicyKind::tabulated: return interpolate(x);
    }
    return 0.0;
  }

  const FeedbackPolicy& spec() const noexcept { return spec_; }

  /// M1: declared bound or the natural one for the kind.
  double bound() const noexcept { return bound_; }

  /// True when |pi(x)| <= M1 over the tabulated points and kind-specific sup.
  bool within_bound() const {
    switch (spec_.kind) {
      case PolicyKind::pi_star: return sol_->m1() / 1.1 <= bound_ * (1 + 1e-12);
      case PolicyKind::zero: return bound_ >= 0;
      case PolicyKind::constant: return std::abs(spec_.value) <= bound_;
      case PolicyKind::tabulated:
        return std::all_of(spec_.table.begin(), spec_.table.end(),
                           [&](const auto& row) { return std::abs(row.second) <= bound_; });
    }
    return false;
  }

 private:
  double natural_bound(const GameSolution& sol) const {
    switch (spec_.kind) {
      case PolicyKind::pi_star: return sol.m1();
      case PolicyKind::zero: return 0.0;
      case PolicyKind::constant: return std::abs(spec_.value);
      case PolicyKind::tabulated: {
        double sup = 0.0;
        for (const auto& [x, v] : spec_.table) sup = std::max(sup, std::abs(v));
        return sup;
      }
    }
    return 0.0;
  }

  double interpolate(double x) const {
    detail::require_in_domain(x, a_);
    const auto& t = spec_.table;
    if (x <= t.front().first) return t.front().second;
    if (x >= t.back().first) return t.back().second;
    const auto it = std::upper_bound(t.begin(), t.end(), x,
                                     [](double v, const auto& row) { return v < row.first; });
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    return y0 + (x - x0) / (x1 - x0) * (y1 - y0);
  }

  FeedbackPolicy spec_;
  double a_;
  std::optional<GameSolution> sol_;
  double bound_ = 0.0;
};

}  // namespace ruingame
