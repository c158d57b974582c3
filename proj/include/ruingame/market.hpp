#pragma once

namespace ruingame {

/// Black-Scholes market and preference constants.
///
/// Units: mu, r, lambda are rates (1/time); sigma is 1/sqrt(time);
/// rho is dimensionless; a is wealth.
struct MarketParams {
  double mu = 0.0;      ///< drift of the risky asset
  double r = 0.0;       ///< riskless rate
  double sigma = 0.0;   ///< volatility of the risky asset
  double lambda = 0.0;  ///< death intensity before time scaling
  double rho = 0.0;     ///< penalty paid on ruin
  double a = 0.0;       ///< ruin level

  /// Market price of risk (mu - r) / sigma.
  double theta() const noexcept { return (mu - r) / sigma; }

  /// theta^2 / 2, the maximizer's entropy price per unit time.
  double half_theta_sq() const noexcept {
    const double t = theta();
    return 0.5 * t * t;
  }

  friend bool operator==(const MarketParams&, const MarketParams&) = default;
};

}  // namespace ruingame
