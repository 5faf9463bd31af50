#pragma once

#include <stdexcept>
#include <string>

namespace kinturb {

/// Invalid grid, model, or scenario configuration (bad parameter values).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The sufficient convergence condition NOR < 1 does not hold; the
/// iteration refuses to start.
class StabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iteration cap was exceeded. Carries the last measured residual (or
/// successive-difference norm) and, when raised from the time loop, the
/// failing step index.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_residual, int step = -1)
      : std::runtime_error(what), last_residual_(last_residual), step_(step) {}

  double last_residual() const noexcept { return last_residual_; }
  int step() const noexcept { return step_; }

 private:
  double last_residual_;
  int step_;
};

}  // namespace kinturb
