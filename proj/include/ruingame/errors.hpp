#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace ruingame {

/// A numerical procedure failed (non-finite state, non-convergence, every
/// Monte Carlo path faulted). Carries the last good (time, state) when known.
class NumericalFault : public std::runtime_error {
 public:
  explicit NumericalFault(const std::string& what,
                          std::optional<double> last_time = std::nullopt,
                          std::optional<double> last_state = std::nullopt)
      : std::runtime_error(what), last_time_(last_time), last_state_(last_state) {}

  std::optional<double> last_time() const noexcept { return last_time_; }
  std::optional<double> last_state() const noexcept { return last_state_; }

 private:
  std::optional<double> last_time_;
  std::optional<double> last_state_;
};

}  // namespace ruingame
