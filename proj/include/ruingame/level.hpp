#pragma once

#include <limits>
#include <ostream>
#include <stdexcept>

namespace ruingame {

/// A wealth level that may be +infinity (inf of an empty set).
///
/// Kept distinct from a raw double so that an infinite barrier or safe
/// level never leaks into arithmetic as IEEE inf/NaN.
class Level {
 public:
  static constexpr Level infinite() noexcept { return Level{}; }
  static constexpr Level at(double x) noexcept { return Level{x}; }

  constexpr bool is_finite() const noexcept { return finite_; }

  double value() const {
    if (!finite_) throw std::logic_error("Level::value() on infinite level");
    return value_;
  }

  /// True when x lies strictly below this level.
  constexpr bool above(double x) const noexcept { return !finite_ || x < value_; }

  /// Finite value, or `fallback` when infinite.
  constexpr double value_or(double fallback) const noexcept {
    return finite_ ? value_ : fallback;
  }

  friend constexpr bool operator==(const Level&, const Level&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Level& lv) {
    if (lv.finite_) return os << lv.value_;
    return os << "inf";
  }

 private:
  constexpr Level() noexcept = default;
  constexpr explicit Level(double x) noexcept : finite_(true), value_(x) {}

  bool finite_ = false;
  double value_ = 0.0;
};

inline constexpr Level min(const Level& lhs, const Level& rhs) noexcept {
  if (!lhs.is_finite()) return rhs;
  if (!rhs.is_finite()) return lhs;
  return lhs.value_or(0) <= rhs.value_or(0) ? lhs : rhs;
}

}  // namespace ruingame
