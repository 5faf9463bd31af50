#include "kinturb/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kinturb/errors.hpp"
#include "kinturb/parallel.hpp"

namespace kinturb {

double nor_bound(const CoefficientSet& cs) {
  double worst = 0.0;
  for (int v = 0; v < cs.blocks(); ++v) {
    const SchemeCoefficients& c = cs[v];
    const double row =
        (std::fabs(c.a1) + std::fabs(c.a2) + std::fabs(c.b1) + std::fabs(c.b2)) / c.d;
    worst = std::max(worst, row);
  }
  return worst;
}

double optimal_s(const CoefficientSet& cs) { return 1.0 / cs.d(); }

namespace {

// r = f - A x and |r|_inf in one pass; per-block maxima are reduced in block
// order so the result does not depend on the thread count.
double residual_into(const DensityField& f, const DensityField& x,
                     const CoefficientSet& cs, DensityField& r, int threads,
                     std::vector<double>& block_norms) {
  const int m1 = f.shape().m1;
  const int m2 = f.shape().m2;
  block_norms.assign(static_cast<size_t>(cs.blocks()), 0.0);
  parallel_for(cs.blocks(), threads, [&](long lo, long hi) {
    for (long v = lo; v < hi; ++v) {
      const SchemeCoefficients& c = cs[static_cast<int>(v)];
      const auto fin = f.block(static_cast<int>(v));
      const auto xin = x.block(static_cast<int>(v));
      const auto rout = r.block(static_cast<int>(v));
      double nrm = 0.0;
      for (int k2 = 0; k2 < m2; ++k2) {
        for (int k1 = 0; k1 < m1; ++k1) {
          const long i = static_cast<long>(k2) * m1 + k1;
          double s = c.d * xin[i];
          if (k1 > 0) s += c.a1 * xin[i - 1];
          if (k1 + 1 < m1) s += c.b1 * xin[i + 1];
          if (k2 > 0) s += c.a2 * xin[i - m1];
          if (k2 + 1 < m2) s += c.b2 * xin[i + m1];
          const double res = fin[i] - s;
          rout[i] = res;
          nrm = std::max(nrm, std::fabs(res));
        }
      }
      block_norms[static_cast<size_t>(v)] = nrm;
    }
  });
  double nrm = 0.0;
  for (double b : block_norms) nrm = std::max(nrm, b);
  return nrm;
}

}  // namespace

RichardsonResult richardson_solve(const DensityField& f, const CoefficientSet& cs,
                                  const SolverSettings& settings, int threads,
                                  const RichardsonObserver& observer) {
  if (!(f.shape() == cs.shape()))
    throw std::invalid_argument("richardson_solve: shape mismatch");
  if (!f.all_finite())
    throw std::invalid_argument("richardson_solve: right-hand side is not finite");

  const double nor = nor_bound(cs);
  if (!(nor < 1.0))
    throw StabilityError("richardson_solve: NOR = " + std::to_string(nor) +
                         " >= 1, iteration would not contract");

  const double s = settings.s > 0.0 ? settings.s : optimal_s(cs);

  RichardsonResult out;
  out.x = f;
  DensityField r(f.shape());
  std::vector<double> block_norms;
  double res = residual_into(f, out.x, cs, r, threads, block_norms);
  if (observer) observer(0, out.x, res);
  int iters = 0;
  while (res > settings.tol_linear) {
    if (iters >= settings.max_linear_iters)
      throw ConvergenceError(
          "richardson_solve: residual " + std::to_string(res) + " above tolerance " +
              std::to_string(settings.tol_linear) + " after " + std::to_string(iters) +
              " iterations",
          res);
    const auto xd = out.x.data();
    const auto rd = r.data();
    parallel_for(static_cast<long>(xd.size()), threads, [&](long lo, long hi) {
      for (long i = lo; i < hi; ++i) xd[i] += s * rd[i];
    });
    ++iters;
    res = residual_into(f, out.x, cs, r, threads, block_norms);
    if (observer) observer(iters, out.x, res);
  }
  out.iters = iters;
  out.residual = res;
  return out;
}

Stepper::Stepper(Problem problem)
    : p_(std::move(problem)),
      nor_(nor_bound(p_.coeffs)),
      f_n_(p_.coeffs.shape()),
      f_p_(p_.coeffs.shape()),
      source_sum_(p_.coeffs.shape()),
      u_prev_(p_.coeffs.shape()) {
  p_.threads = resolve_threads(p_.threads);
}

StepReport Stepper::step(const DensityField& u_n, int n, DensityField& u_np1) {
  if (!(u_n.shape() == p_.coeffs.shape()))
    throw std::invalid_argument("step: field shape does not match problem");
  if (!u_n.all_finite()) throw std::invalid_argument("step: field is not finite");
  if (!(nor_ < 1.0))
    throw StabilityError("step: NOR = " + std::to_string(nor_) + " >= 1");

  const double tol_eff = p_.settings.tol_picard * (1.0 + u_n.norm_inf());

  mixer_apply(u_n, p_.vg, p_.weights, p_.kappa, p_.threads, f_n_);
  const DensityField dir = dirichlet_terms(n, p_.boundary, p_.coeffs);

  const DensityField* src = nullptr;
  if (p_.source) {
    const double t0 = p_.tau * n;
    const double t1 = p_.tau * (n + 1);
    for (int v = 0; v < p_.coeffs.blocks(); ++v) {
      const int l1 = p_.vg.l1_of(v);
      const int l2 = p_.vg.l2_of(v);
      const auto out = source_sum_.block(v);
      for (int k2 = 0; k2 < p_.sg.M2; ++k2)
        for (int k1 = 0; k1 < p_.sg.M1; ++k1)
          out[static_cast<long>(k2) * p_.sg.M1 + k1] =
              p_.source(t0, p_.sg.x1(k1), p_.sg.x2(k2), l1, l2) +
              p_.source(t1, p_.sg.x1(k1), p_.sg.x2(k2), l1, l2);
    }
    src = &source_sum_;
  }

  StepReport report;
  report.nor = nor_;
  u_prev_ = u_n;
  for (int p = 0; p < p_.settings.max_picard_iters; ++p) {
    if (p == 0)
      f_p_ = f_n_;  // u^(0) = u^n
    else
      mixer_apply(u_prev_, p_.vg, p_.weights, p_.kappa, p_.threads, f_p_);

    const DensityField rhs =
        assemble_rhs(u_n, p_.coeffs, f_n_, f_p_, dir, p_.tau, src, p_.threads);
    RichardsonResult lin = richardson_solve(rhs, p_.coeffs, p_.settings, p_.threads);
    report.linear_iters_total += lin.iters;
    report.final_linear_residual = lin.residual;
    report.picard_iters = p + 1;
    report.final_picard_delta = max_abs_diff(lin.x, u_prev_);
    u_prev_ = std::move(lin.x);
    if (report.final_picard_delta <= tol_eff) {
      u_np1 = u_prev_;
      return report;
    }
  }
  throw ConvergenceError(
      "time step: Picard difference " + std::to_string(report.final_picard_delta) +
          " above tolerance " + std::to_string(tol_eff) + " after " +
          std::to_string(report.picard_iters) + " sweeps",
      report.final_picard_delta);
}

std::pair<DensityField, StepReport> time_step(const DensityField& u_n, int n,
                                              const Problem& problem) {
  Stepper stepper(problem);
  DensityField u_np1(u_n.shape());
  StepReport report = stepper.step(u_n, n, u_np1);
  return {std::move(u_np1), report};
}

SimulationResult run_simulation(const Problem& problem, const DensityField& initial,
                                int n_steps, const StepObserver& observer) {
  if (n_steps < 0) throw std::invalid_argument("run_simulation: negative step count");
  SimulationResult result;
  result.final = initial;
  result.reports.reserve(static_cast<size_t>(n_steps));
  if (n_steps == 0) return result;

  Stepper stepper(problem);
  DensityField next(initial.shape());
  for (int n = 0; n < n_steps; ++n) {
    try {
      StepReport rep = stepper.step(result.final, n, next);
      result.reports.push_back(rep);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(std::string(e.what()) + " (step " + std::to_string(n) +
                                 ")",
                             e.last_residual(), n);
    }
    std::swap(result.final, next);
    if (observer)
      observer(n + 1, problem.tau * (n + 1), result.final, result.reports.back());
  }
  return result;
}

}  // namespace kinturb
