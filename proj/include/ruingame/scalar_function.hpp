#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ruingame {

enum class FunctionKind { constant, affine, piecewise_linear, exp_decay };

inline std::string_view to_string(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::constant: return "constant";
    case FunctionKind::affine: return "affine";
    case FunctionKind::piecewise_linear: return "piecewise-linear";
    case FunctionKind::exp_decay: return "exp-decay";
  }
  return "?";
}

inline FunctionKind function_kind_from_string(std::string_view s) {
  if (s == "constant") return FunctionKind::constant;
  if (s == "affine") return FunctionKind::affine;
  if (s == "piecewise-linear") return FunctionKind::piecewise_linear;
  if (s == "exp-decay") return FunctionKind::exp_decay;
  throw std::invalid_argument("unknown function kind '" + std::string(s) + "'");
}

namespace shape {

struct Constant {
  double value = 0.0;
  friend bool operator==(const Constant&, const Constant&) = default;
};

/// intercept + slope * (x - domain_lo)
struct Affine {
  double intercept = 0.0;
  double slope = 0.0;
  friend bool operator==(const Affine&, const Affine&) = default;
};

/// Linear interpolation through (breaks[i], values[i]); constant outside
/// [breaks.front(), breaks.back()].
struct PiecewiseLinear {
  std::vector<double> breaks;
  std::vector<double> values;
  friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;
};

/// offset + amplitude * exp(-rate * (x - domain_lo))
struct ExpDecay {
  double amplitude = 0.0;
  double rate = 0.0;
  double offset = 0.0;
  friend bool operator==(const ExpDecay&, const ExpDecay&) = default;
};

}  // namespace shape

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// A real function on [domain_lo, inf) drawn from a closed parametric family.
///
/// Used for the excess consumption e(x) and the low-wealth penalty l(x).
/// Every kind carries analytic sup/inf/Lipschitz/monotonicity metadata so the
/// problem assumptions can be checked without sampling.
class ScalarFunction {
 public:
  using Shape = std::variant<shape::Constant, shape::Affine, shape::PiecewiseLinear,
                             shape::ExpDecay>;

  ScalarFunction() : ScalarFunction(shape::Constant{0.0}, 0.0) {}

  ScalarFunction(Shape s, double domain_lo) : shape_(std::move(s)), lo_(domain_lo) {
    if (!std::isfinite(lo_)) throw std::invalid_argument("domain_lo must be finite");
    if (auto* pw = std::get_if<shape::PiecewiseLinear>(&shape_)) check_table(*pw);
    std::visit([](const auto& p) { check_finite(p); }, shape_);
  }

  static ScalarFunction constant(double value, double domain_lo) {
    return {shape::Constant{value}, domain_lo};
  }
  static ScalarFunction affine(double intercept, double slope, double domain_lo) {
    return {shape::Affine{intercept, slope}, domain_lo};
  }
  static ScalarFunction piecewise_linear(std::vector<double> breaks, std::vector<double> values,
                                         double domain_lo) {
    return {shape::PiecewiseLinear{std::move(breaks), std::move(values)}, domain_lo};
  }
  static ScalarFunction exp_decay(double amplitude, double rate, double offset,
                                  double domain_lo) {
    return {shape::ExpDecay{amplitude, rate, offset}, domain_lo};
  }

  FunctionKind kind() const noexcept { return static_cast<FunctionKind>(shape_.index()); }
  const Shape& shape() const noexcept { return shape_; }
  double domain_lo() const noexcept { return lo_; }

  /// Evaluates the function; x below the domain is a domain error.
  double operator()(double x) const {
    if (!(x >= lo_)) {
      std::ostringstream msg;
      msg << "x=" << x << " is below the domain start " << lo_;
      throw std::domain_error(msg.str());
    }
    return eval_unchecked(x);
  }

  /// Evaluation without the domain check, for callers that already clamp.
  double eval_unchecked(double x) const {
    return std::visit(
        overloaded{
            [](const shape::Constant& c) { return c.value; },
            [&](const shape::Affine& f) { return f.intercept + f.slope * (x - lo_); },
            [&](const shape::PiecewiseLinear& f) { return interpolate(f, x); },
            [&](const shape::ExpDecay& f) {
              return f.offset + f.amplitude * std::exp(-f.rate * (x - lo_));
            },
        },
        shape_);
  }

  /// Least upper bound over the domain (+inf when unbounded).
  double sup() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(
        overloaded{
            [](const shape::Constant& c) { return c.value; },
            [](const shape::Affine& f) { return f.slope > 0 ? inf : f.intercept; },
            [](const shape::PiecewiseLinear& f) {
              return *std::max_element(f.values.begin(), f.values.end());
            },
            [](const shape::ExpDecay& f) {
              if (f.rate < 0) return f.amplitude > 0 ? inf : f.offset;
              return f.offset + std::max(f.amplitude, 0.0);
            },
        },
        shape_);
  }

  /// Greatest lower bound over the domain (-inf when unbounded).
  double inf() const {
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    return std::visit(
        overloaded{
            [](const shape::Constant& c) { return c.value; },
            [](const shape::Affine& f) { return f.slope < 0 ? ninf : f.intercept; },
            [](const shape::PiecewiseLinear& f) {
              return *std::min_element(f.values.begin(), f.values.end());
            },
            [](const shape::ExpDecay& f) {
              if (f.rate < 0) return f.amplitude < 0 ? ninf : f.offset;
              return f.offset + std::min(f.amplitude, 0.0);
            },
        },
        shape_);
  }

  /// Global Lipschitz constant on [domain_lo, inf) (+inf if none exists).
  double lipschitz() const {
    return std::visit(
        overloaded{
            [](const shape::Constant&) { return 0.0; },
            [](const shape::Affine& f) { return std::abs(f.slope); },
            [](const shape::PiecewiseLinear& f) {
              double k = 0.0;
              for (std::size_t i = 1; i < f.breaks.size(); ++i) {
                k = std::max(k, std::abs((f.values[i] - f.values[i - 1]) /
                                         (f.breaks[i] - f.breaks[i - 1])));
              }
              return k;
            },
            [](const shape::ExpDecay& f) {
              if (f.rate < 0 && f.amplitude != 0) return std::numeric_limits<double>::infinity();
              return std::abs(f.amplitude * f.rate);
            },
        },
        shape_);
  }

  /// Analytic monotonicity check.
  bool non_increasing() const {
    return std::visit(
        overloaded{
            [](const shape::Constant&) { return true; },
            [](const shape::Affine& f) { return f.slope <= 0; },
            [](const shape::PiecewiseLinear& f) {
              return std::is_sorted(f.values.rbegin(), f.values.rend());
            },
            [](const shape::ExpDecay& f) { return f.amplitude * f.rate >= 0; },
        },
        shape_);
  }

  /// Points where the function is not smooth (empty for smooth kinds).
  std::vector<double> breakpoints() const {
    if (const auto* pw = std::get_if<shape::PiecewiseLinear>(&shape_)) return pw->breaks;
    return {};
  }

  friend bool operator==(const ScalarFunction& lhs, const ScalarFunction& rhs) {
    return lhs.lo_ == rhs.lo_ && lhs.shape_ == rhs.shape_;
  }

 private:
  static void check_table(const shape::PiecewiseLinear& f) {
    if (f.breaks.empty() || f.breaks.size() != f.values.size())
      throw std::invalid_argument("piecewise-linear needs equal, non-empty breaks and values");
    for (std::size_t i = 1; i < f.breaks.size(); ++i) {
      if (!(f.breaks[i] > f.breaks[i - 1]))
        throw std::invalid_argument("piecewise-linear breakpoints must be strictly increasing");
    }
  }

  static void require_finite(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("function parameters must be finite");
  }
  static void check_finite(const shape::Constant& c) { require_finite(c.value); }
  static void check_finite(const shape::Affine& f) {
    require_finite(f.intercept);
    require_finite(f.slope);
  }
  static void check_finite(const shape::PiecewiseLinear& f) {
    for (double v : f.breaks) require_finite(v);
    for (double v : f.values) require_finite(v);
  }
  static void check_finite(const shape::ExpDecay& f) {
    require_finite(f.amplitude);
    require_finite(f.rate);
    require_finite(f.offset);
  }

  static double interpolate(const shape::PiecewiseLinear& f, double x) {
    if (x <= f.breaks.front()) return f.values.front();
    if (x >= f.breaks.back()) return f.values.back();
    const auto it = std::upper_bound(f.breaks.begin(), f.breaks.end(), x);
    const auto i = static_cast<std::size_t>(it - f.breaks.begin());
    const double x0 = f.breaks[i - 1], x1 = f.breaks[i];
    const double w = (x - x0) / (x1 - x0);
    return f.values[i - 1] + w * (f.values[i] - f.values[i - 1]);
  }

  Shape shape_;
  double lo_;
};

}  // namespace ruingame
