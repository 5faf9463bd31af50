#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "kinturb/field.hpp"
#include "kinturb/grid.hpp"
#include "kinturb/mixer.hpp"
#include "kinturb/scheme.hpp"

namespace kinturb {

/// Iteration controls for one time step.
///
/// s <= 0 selects the optimal relaxation 1/d automatically. The Picard
/// tolerance is relative to the field scale: a step from u^n accepts when
/// the successive difference drops below tol_picard * (1 + |u^n|_inf).
struct SolverSettings {
  double s = 0.0;
  double tol_linear = 1e-10;
  int max_linear_iters = 500;
  double tol_picard = 1e-8;
  int max_picard_iters = 50;
};

/// Iteration statistics of one accepted time step.
struct StepReport {
  int picard_iters = 0;
  int linear_iters_total = 0;
  double final_picard_delta = 0.0;
  double final_linear_residual = 0.0;
  double nor = 0.0;
};

/// NOR = max over velocity nodes of (|a1| + |a2| + |b1| + |b2|) / d.
/// NOR < 1 is the sufficient condition for max-norm convergence of the
/// Richardson iteration with the optimal relaxation.
double nor_bound(const CoefficientSet& cs);

/// Optimal Richardson relaxation 1/d.
double optimal_s(const CoefficientSet& cs);

struct RichardsonResult {
  DensityField x;
  int iters = 0;
  double residual = 0.0;
};

/// Called with (update count, current iterate, current residual norm);
/// invoked once before the first update.
using RichardsonObserver =
    std::function<void(int iter, const DensityField& x, double residual)>;

/// Solves A x = f by the relaxed Richardson iteration
/// x_{k+1} = x_k + s (f - A x_k), starting from x_0 = f, until the residual
/// max-norm drops to settings.tol_linear.
///
/// Refuses to iterate when NOR >= 1; exceeding the iteration cap raises a
/// convergence error carrying the last residual.
RichardsonResult richardson_solve(const DensityField& f, const CoefficientSet& cs,
                                  const SolverSettings& settings, int threads = 1,
                                  const RichardsonObserver& observer = {});

/// Everything needed to advance the density field one time step.
struct Problem {
  SpaceGrid sg;
  VelocityGrid vg;
  QuadratureWeights weights;
  CoefficientSet coeffs;
  BoundaryData boundary;
  double kappa = 0.0;
  double tau = 0.0;
  SolverSettings settings;
  SourceFn source;  // optional
  int threads = 1;
};

/// Advances the field by Picard iteration on the nonlinear time-step system,
/// reusing workspace buffers across steps.
///
/// Each sweep refreshes the mixer term of the current iterate, reassembles
/// the right-hand side, and Richardson-solves the linear system; the mixer
/// term of u^n is computed once per step. Sweeping starts from u^(0) = u^n.
class Stepper {
 public:
  explicit Stepper(Problem problem);

  /// One step from level n to n+1. Throws ConvergenceError when the Picard
  /// cap is exceeded, StabilityError when NOR >= 1.
  StepReport step(const DensityField& u_n, int n, DensityField& u_np1);

  double nor() const { return nor_; }
  const Problem& problem() const { return p_; }

 private:
  Problem p_;
  double nor_ = 0.0;
  DensityField f_n_;      // mixer term of u^n
  DensityField f_p_;      // mixer term of the current Picard iterate
  DensityField source_sum_;
  DensityField u_prev_;
};

/// Single-shot convenience wrapper around Stepper.
std::pair<DensityField, StepReport> time_step(const DensityField& u_n, int n,
                                              const Problem& problem);

/// Called after each accepted step with (step index n+1, t_{n+1}, field, report).
using StepObserver =
    std::function<void(int step, double t, const DensityField& u, const StepReport&)>;

struct SimulationResult {
  DensityField final;
  std::vector<StepReport> reports;
};

/// Advances n_steps steps from the initial field. Step failures are
/// rethrown with the failing step index attached. n_steps = 0 returns the
/// initial field unchanged.
SimulationResult run_simulation(const Problem& problem, const DensityField& initial,
                                int n_steps, const StepObserver& observer = {});

}  // namespace kinturb
