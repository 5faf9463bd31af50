#include "kinturb/runner.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "kinturb/errors.hpp"
#include "kinturb/euler.hpp"
#include "kinturb/output.hpp"

namespace kinturb {

StabilityReport check_stability(const Config& cfg) {
  const SpaceGrid sg = space_grid(cfg);
  const VelocityGrid vg = velocity_grid(cfg);
  const TimeGrid tg = time_grid(cfg);
  const CoefficientSet cs = CoefficientSet::build(sg, vg, tg.tau, cfg.nu);

  StabilityReport rep;
  rep.s_opt = optimal_s(cs);
  rep.d = cs.d();
  for (int v = 0; v < cs.blocks(); ++v) {
    const SchemeCoefficients& c = cs[v];
    const double row =
        (std::fabs(c.a1) + std::fabs(c.a2) + std::fabs(c.b1) + std::fabs(c.b2)) / c.d;
    if (row > rep.nor) {
      rep.nor = row;
      rep.worst_l1 = vg.l1_of(v);
      rep.worst_l2 = vg.l2_of(v);
      rep.worst = c;
    }
  }
  return rep;
}

RunSummary run_batch(const Config& cfg, const ProgressFn& progress) {
  validate(cfg);
  const StabilityReport stability = check_stability(cfg);
  if (!stability.stable())
    throw StabilityError(
        "run: NOR = " + std::to_string(stability.nor) + " >= 1 at velocity node (" +
        std::to_string(stability.worst_l1) + ", " + std::to_string(stability.worst_l2) +
        "); refusing to start (reduce tau or refine the space grid)");

  Problem problem = build_problem(cfg);
  const SpaceGrid& sg = problem.sg;
  const VelocityGrid& vg = problem.vg;
  const QuadratureWeights& w = problem.weights;
  const TimeGrid tg = time_grid(cfg);

  const auto snaps_list = snapshot_steps(cfg);
  const std::set<int> snaps(snaps_list.begin(), snaps_list.end());

  RunWriter writer(cfg.output_dir, config_hash(cfg));

  DensityField u = initial_field(cfg, sg, vg);

  auto snapshot = [&](int step, const DensityField& field) {
    const EulerFields fields = compute_euler(field, vg, w, cfg.kappa, cfg.eps_div);
    const MaskedVectorField unit = unit_velocity_field(fields.velocity, cfg.eps_div);
    const MaskedScalarField omega = vorticity(fields.velocity, sg);
    writer.write_snapshot(step, sg, fields, unit, omega);
  };

  if (snaps.count(0)) snapshot(0, u);

  // Boundary-extended moments of the previous level, for the mass budget.
  ExtendedScalar rho_prev =
      extend_density(euler_density(u, w, cfg.kappa), problem.boundary, 0, vg, w,
                     cfg.kappa);
  ExtendedVector p_prev = extend_impulse(euler_impulse(u, vg, w, cfg.kappa),
                                         problem.boundary, 0, vg, w, cfg.kappa);

  RunSummary summary;
  summary.output_dir = cfg.output_dir;
  summary.final_mass = total_mass(rho_prev, sg);

  const auto observer = [&](int step, double t, const DensityField& field,
                            const StepReport& rep) {
    ExtendedScalar rho_now = extend_density(euler_density(field, w, cfg.kappa),
                                            problem.boundary, step, vg, w, cfg.kappa);
    ExtendedVector p_now = extend_impulse(euler_impulse(field, vg, w, cfg.kappa),
                                          problem.boundary, step, vg, w, cfg.kappa);
    ExtendedVector p_mid;
    p_mid.c1 = p_now.c1;
    p_mid.c2 = p_now.c2;
    for (size_t i = 0; i < p_mid.c1.v.size(); ++i) {
      p_mid.c1.v[i] = 0.5 * (p_prev.c1.v[i] + p_now.c1.v[i]);
      p_mid.c2.v[i] = 0.5 * (p_prev.c2.v[i] + p_now.c2.v[i]);
    }
    const MassBudget budget = mass_budget(rho_prev, rho_now, p_mid, sg, cfg.nu, tg.tau);
    writer.append_budget(step, t, budget);
    writer.append_report(step, t, rep);
    if (snaps.count(step)) snapshot(step, field);

    rho_prev = std::move(rho_now);
    p_prev = std::move(p_now);
    summary.steps_done = step;
    summary.final_mass = budget.mass;

    if (progress) {
      ProgressInfo info;
      info.step = step;
      info.total = cfg.N;
      info.t = t;
      info.picard_iters = rep.picard_iters;
      info.linear_iters_total = rep.linear_iters_total;
      info.picard_delta = rep.final_picard_delta;
      info.linear_residual = rep.final_linear_residual;
      info.mass = budget.mass;
      info.nor = rep.nor;
      progress(info);
    }
  };

  try {
    run_simulation(problem, u, cfg.N, observer);
  } catch (...) {
    writer.finalize(false);
    throw;
  }
  writer.finalize(true);
  return summary;
}

}  // namespace kinturb
