#pragma once

#include <functional>
#include <string>

#include "kinturb/config.hpp"
#include "kinturb/scheme.hpp"
#include "kinturb/solver.hpp"

namespace kinturb {

/// Stability pre-check results for a configuration.
struct StabilityReport {
  double nor = 0.0;
  double s_opt = 0.0;
  double d = 0.0;
  int worst_l1 = 0;
  int worst_l2 = 0;
  SchemeCoefficients worst;
  bool stable() const { return nor < 1.0; }
};

StabilityReport check_stability(const Config& cfg);

struct ProgressInfo {
  int step = 0;
  int total = 0;
  double t = 0.0;
  int picard_iters = 0;
  int linear_iters_total = 0;
  double picard_delta = 0.0;
  double linear_residual = 0.0;
  double mass = 0.0;
  double nor = 0.0;
};

using ProgressFn = std::function<void(const ProgressInfo&)>;

struct RunSummary {
  int steps_done = 0;
  double final_mass = 0.0;
  std::string output_dir;
};

/// Executes a full batch run: stability check, time integration, snapshot
/// and diagnostic exports into cfg.output_dir.
///
/// Throws StabilityError when NOR >= 1 and ConvergenceError (with the step
/// index) when an iteration cap is exceeded; partial outputs stay on disk
/// with the MANIFEST marked incomplete.
RunSummary run_batch(const Config& cfg, const ProgressFn& progress = {});

}  // namespace kinturb
