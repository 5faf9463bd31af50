#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "kinturb/errors.hpp"
#include "kinturb/grid.hpp"
#include "kinturb/scenario.hpp"
#include "kinturb/solver.hpp"
#include "support/manufactured.hpp"
#include "support/oracles.hpp"

using namespace kinturb;

namespace {

DensityField random_field(const FieldShape& shape, unsigned seed) {
  DensityField u(shape);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (double& v : u.data()) v = dist(rng);
  return u;
}

Problem collision_problem(int m, int n_vel, double tau, double nu, double kappa) {
  Problem p;
  p.sg = build_space_grid(1.0, 1.0, m, m);
  p.vg = build_velocity_grid(1.0, 1.0, n_vel, n_vel, n_vel, n_vel);
  p.weights = trapezoid_weights(p.vg);
  p.coeffs = CoefficientSet::build(p.sg, p.vg, tau, nu);
  CollisionParams params;
  params.ramp_rate = 0.05;
  p.boundary = collision_boundary(params, p.sg, p.vg);
  p.kappa = kappa;
  p.tau = tau;
  p.threads = 1;
  return p;
}

}  // namespace

TEST_CASE("nor_bound: direct value and diffusion-only bound") {
  const SpaceGrid sg = build_space_grid(1.5, 1.5, 2, 2);  // h = 0.5
  const VelocityGrid vg = build_velocity_grid(1.0, 1.0, 1, 1, 1, 1);
  const CoefficientSet cs = CoefficientSet::build(sg, vg, 0.1, 0.05);
  // worst node (|l1| = |l2| = 1): (0.06 + 0.04) * 2 / 1.04
  CHECK(nor_bound(cs) == doctest::Approx(0.2 / 1.04).epsilon(1e-13));

  const VelocityGrid rest = build_velocity_grid(1.0, 1.0, 0, 0, 0, 0);
  const CoefficientSet cs0 = CoefficientSet::build(sg, rest, 0.1, 0.2);
  const double visc = 0.2 * (cs0[0].mu1 + cs0[0].mu2);
  CHECK(nor_bound(cs0) == doctest::Approx(visc / (1.0 + visc)).epsilon(1e-13));
  CHECK(nor_bound(cs0) < 1.0);
}

TEST_CASE("nor_bound: attained at the largest-speed corner node") {
  const SpaceGrid sg = build_space_grid(1.0, 2.0, 6, 5);
  const VelocityGrid vg = build_velocity_grid(0.3, 0.4, 3, 2, 1, 4);
  const CoefficientSet cs = CoefficientSet::build(sg, vg, 0.02, 0.004);
  double exhaustive = 0.0;
  for (int l1 = -vg.MR1; l1 <= vg.PR1; ++l1) {
    for (int l2 = -vg.MR2; l2 <= vg.PR2; ++l2) {
      const SchemeCoefficients c = coefficients(l1, l2, sg, vg, 0.02, 0.004);
      exhaustive = std::max(exhaustive, (std::fabs(c.a1) + std::fabs(c.a2) +
                                         std::fabs(c.b1) + std::fabs(c.b2)) /
                                            c.d);
    }
  }
  CHECK(nor_bound(cs) == doctest::Approx(exhaustive).epsilon(1e-15));
  // the corner with the largest |alpha| per dimension attains it
  const SchemeCoefficients corner = coefficients(-3, 4, sg, vg, 0.02, 0.004);
  CHECK((std::fabs(corner.a1) + std::fabs(corner.a2) + std::fabs(corner.b1) +
         std::fabs(corner.b2)) /
            corner.d ==
        doctest::Approx(nor_bound(cs)).epsilon(1e-15));
}

TEST_CASE("optimal_s: reciprocal of the diagonal") {
  const SpaceGrid sg = build_space_grid(1.5, 1.5, 2, 2);
  const VelocityGrid vg = build_velocity_grid(1.0, 1.0, 1, 1, 1, 1);
  CHECK(optimal_s(CoefficientSet::build(sg, vg, 0.1, 0.05)) ==
        doctest::Approx(1.0 / 1.04).epsilon(1e-14));
  CHECK(optimal_s(CoefficientSet::build(sg, vg, 0.1, 0.0)) == 1.0);
  CHECK(optimal_s(CoefficientSet::build(sg, vg, 0.1, 0.3)) < 1.0);
}

TEST_CASE("richardson: diagonal system converges in one update") {
  const SpaceGrid sg = build_space_grid(1.0, 1.0, 1, 1);
  const VelocityGrid vg = build_velocity_grid(1.0, 1.0, 1, 1, 1, 1);
  const CoefficientSet cs = CoefficientSet::build(sg, vg, 0.1, 0.05);
  const DensityField f = random_field(cs.shape(), 2);
  const RichardsonResult r = richardson_solve(f, cs, SolverSettings{});
  CHECK(r.iters == 1);
  for (int v = 0; v < vg.count(); ++v)
    CHECK(r.x.block(v)[0] == doctest::Approx(f.block(v)[0] / cs[v].d).epsilon(1e-14));
}

TEST_CASE("richardson: apply-then-solve round trip") {
  const SpaceGrid sg = build_space_grid(1.0, 1.0, 3, 3);
  const VelocityGrid vg = build_velocity_grid(0.8, 0.8, 1, 1, 1, 1);
  const CoefficientSet cs = CoefficientSet::build(sg, vg, 0.07, 0.01);
  const DensityField w = random_field(cs.shape(), 4);
  const DensityField f = apply_A(w, cs);
  const RichardsonResult r = richardson_solve(f, cs, SolverSettings{});
  CHECK(max_abs_diff(r.x, w) <= 1e-8);
}

TEST_CASE("richardson: matches dense elimination") {
  const SpaceGrid sg = build_space_grid(1.0, 1.0, 4, 4);
  const VelocityGrid vg = build_velocity_grid(0.9, 0.9, 1, 1, 1, 1);
  const CoefficientSet cs = CoefficientSet::build(sg, vg, 0.05, 0.02);
  const DensityField f = random_field(cs.shape(), 9);
  SolverSettings st;
  st.tol_linear = 1e-10;
  const RichardsonResult r = richardson_solve(f, cs, st);
  const auto exact =
      test::dense_solve(test::dense_A(cs), {f.data().begin(), f.data().end()});
  for (size_t i = 0; i < exact.size(); ++i)
    CHECK(std::fabs(r.x.data()[i] - exact[i]) <= 1e-8);
}

TEST_CASE("richardson: refuses to run when the bound fails") {
  const SpaceGrid sg = build_space_grid(1.0, 1.0, 4, 4);
  const VelocityGrid vg = build_velocity_grid(1.0, 1.0, 1, 1, 1, 1);
  // huge tau makes the advective row dominate the diagonal
  const CoefficientSet cs = CoefficientSet::build(sg, vg, 5.0, 0.0);
  CHECK(nor_bound(cs) >= 1.0);
  const DensityField f = random_field(cs.shape(), 8);
  CHECK_THROWS_AS(richardson_solve(f, cs, SolverSettings{}), StabilityError);
}

TEST_CASE("richardson: iteration cap raises a convergence error") {
  const SpaceGrid sg = build_space_grid(1.0, 1.0, 3, 3);
  const VelocityGrid vg = build_velocity_grid(0.8, 0.8, 1, 1, 1, 1);
  const CoefficientSet cs = CoefficientSet::build(sg, vg, 0.07, 0.01);
  const DensityField f = random_field(cs.shape(), 10);
  SolverSettings st;
  st.max_linear_iters = 1;
  st.tol_linear = 1e-15;
  CHECK_THROWS_AS(richardson_solve(f, cs, st), ConvergenceError);
  try {
    richardson_solve(f, cs, st);
  } catch (const ConvergenceError& e) {
    CHECK(e.last_residual() > 0.0);
  }
}

TEST_CASE("richardson: measured contraction stays under the bound") {
  const SpaceGrid sg = build_space_grid(1.0, 1.0, 4, 3);
  const VelocityGrid vg = build_velocity_grid(0.7, 0.9, 1, 2, 2, 1);
  const CoefficientSet cs = CoefficientSet::build(sg, vg, 0.06, 0.015);
  const double nor = nor_bound(cs);
  REQUIRE(nor < 1.0);

  for (unsigned seed = 0; seed < 5; ++seed) {
    const DensityField w = random_field(cs.shape(), 100 + seed);
    const DensityField f = apply_A(w, cs);
    const double floor = 1e-2 * (1.0 + w.norm_inf());
    std::vector<double> errors;
    const auto observer = [&](int, const DensityField& x, double) {
      errors.push_back(max_abs_diff(x, w));
    };
    richardson_solve(f, cs, SolverSettings{}, 1, observer);
    int measured = 0;
    for (size_t k = 0; k + 1 < errors.size(); ++k) {
      if (errors[k] < floor) break;
      CHECK(errors[k + 1] / errors[k] <= nor + 1e-12);
      ++measured;
    }
    CHECK(measured >= 3);
  }
}

TEST_CASE("richardson: row bound formula matches the dense norm") {
  const SpaceGrid sg = build_space_grid(1.0, 1.0, 3, 3);
  const VelocityGrid vg = build_velocity_grid(0.8, 0.6, 1, 1, 1, 1);
  const CoefficientSet cs = CoefficientSet::build(sg, vg, 0.06, 0.02);
  const auto dense = test::dense_A(cs);
  const double s_opt = optimal_s(cs);
  for (double s : {s_opt, 0.7 * s_opt, 1.0, 1.2 * s_opt}) {
    CHECK(std::fabs(test::inf_norm_identity_minus(dense, s) -
                    test::row_bound_formula(dense, s)) <= 1e-14);
  }
  CHECK(test::inf_norm_identity_minus(dense, s_opt) <= nor_bound(cs) + 1e-14);
}

TEST_CASE("time step: zero state with zero boundaries stays zero") {
  Problem p = collision_problem(3, 1, 0.05, 0.01, 1.5);
  p.boundary = BoundaryData{};  // no inflow
  const DensityField zero(p.coeffs.shape());
  const auto [u1, rep] = time_step(zero, 0, p);
  CHECK(rep.picard_iters == 1);
  for (double v : u1.data()) CHECK(v == 0.0);
}

TEST_CASE("time step: linear case needs one confirming sweep") {
  Problem p = collision_problem(4, 1, 0.04, 0.02, 0.0);
  const DensityField u0 = random_field(p.coeffs.shape(), 21);
  const auto [u1, rep] = time_step(u0, 0, p);
  CHECK(rep.picard_iters == 2);

  // the accepted field solves the linear system
  const DensityField au = apply_A(u1, p.coeffs);
  DensityField zero(p.coeffs.shape());
  const DensityField rhs = assemble_rhs(u0, p.coeffs, zero, zero,
                                        dirichlet_terms(0, p.boundary, p.coeffs),
                                        p.tau);
  CHECK(max_abs_diff(au, rhs) <= 10.0 * p.settings.tol_linear);
}

TEST_CASE("time step: nonlinear fixed point satisfies the step equation") {
  Problem p = collision_problem(5, 1, 0.04, 0.02, 1.2);
  DensityField u = random_field(p.coeffs.shape(), 33);
  for (double& v : u.data()) v = std::fabs(v);  // physical-looking state

  Stepper stepper(p);
  DensityField u1(u.shape());
  const StepReport rep = stepper.step(u, 2, u1);
  CHECK(rep.picard_iters >= 2);

  DensityField fn(u.shape());
  DensityField fp(u.shape());
  mixer_apply(u, p.vg, p.weights, p.kappa, 1, fn);
  mixer_apply(u1, p.vg, p.weights, p.kappa, 1, fp);
  const DensityField rhs = assemble_rhs(
      u, p.coeffs, fn, fp, dirichlet_terms(2, p.boundary, p.coeffs), p.tau);
  const DensityField au = apply_A(u1, p.coeffs);
  CHECK(max_abs_diff(au, rhs) <=
        10.0 * (p.settings.tol_picard + p.settings.tol_linear));
}

TEST_CASE("time step: Picard cap raises a convergence error") {
  Problem p = collision_problem(4, 1, 0.04, 0.02, 1.2);
  p.settings.max_picard_iters = 1;
  p.settings.tol_picard = 1e-15;
  const DensityField u0 = random_field(p.coeffs.shape(), 44);
  CHECK_THROWS_AS(time_step(u0, 0, p), ConvergenceError);
}

TEST_CASE("run_simulation: zero steps, zero data, compositionality") {
  Problem p = collision_problem(4, 1, 0.04, 0.01, 1.0);

  SUBCASE("zero steps returns the initial field") {
    const DensityField u0 = random_field(p.coeffs.shape(), 3);
    const SimulationResult r = run_simulation(p, u0, 0);
    CHECK(max_abs_diff(r.final, u0) == 0.0);
    CHECK(r.reports.empty());
  }

  SUBCASE("zero data stays zero over ten steps") {
    Problem quiet = p;
    quiet.boundary = BoundaryData{};
    const DensityField zero(p.coeffs.shape());
    const SimulationResult r = run_simulation(quiet, zero, 10);
    CHECK(r.reports.size() == 10);
    for (double v : r.final.data()) CHECK(v == 0.0);
  }

  SUBCASE("two steps equal two manual time steps") {
    const DensityField u0 = empty_initial(p.sg, p.vg);
    const SimulationResult r = run_simulation(p, u0, 2);
    const auto [u1, rep1] = time_step(u0, 0, p);
    const auto [u2, rep2] = time_step(u1, 1, p);
    CHECK(max_abs_diff(r.final, u2) == 0.0);
    CHECK(r.reports[0].picard_iters == rep1.picard_iters);
    CHECK(r.reports[1].picard_iters == rep2.picard_iters);
  }

  SUBCASE("step failures carry the step index") {
    Problem bad = p;
    bad.settings.max_picard_iters = 1;
    bad.settings.tol_picard = 1e-16;
    const DensityField u0 = empty_initial(p.sg, p.vg);
    try {
      run_simulation(bad, u0, 5);
      FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
      CHECK(e.step() >= 0);
      CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
  }
}

TEST_CASE("run_simulation: identical runs are bit-identical, any thread count") {
  Problem p = collision_problem(6, 1, 0.03, 0.01, 1.0);
  const DensityField u0 = empty_initial(p.sg, p.vg);
  const SimulationResult a = run_simulation(p, u0, 8);
  const SimulationResult b = run_simulation(p, u0, 8);
  CHECK(max_abs_diff(a.final, b.final) == 0.0);

  Problem threaded = p;
  threaded.threads = 4;
  const SimulationResult c = run_simulation(threaded, u0, 8);
  CHECK(max_abs_diff(a.final, c.final) == 0.0);
}

TEST_CASE("picard: halving tau does not increase the sweep count") {
  const int steps = 20;
  Problem coarse = collision_problem(8, 1, 0.04, 0.01, 1.0);
  Problem fine = collision_problem(8, 1, 0.02, 0.01, 1.0);
  const DensityField u0 = empty_initial(coarse.sg, coarse.vg);

  int max_coarse = 0;
  for (const auto& rep : run_simulation(coarse, u0, steps).reports)
    max_coarse = std::max(max_coarse, rep.picard_iters);
  int max_fine = 0;
  for (const auto& rep : run_simulation(fine, u0, 2 * steps).reports)
    max_fine = std::max(max_fine, rep.picard_iters);
  CHECK(max_fine <= max_coarse);
}

TEST_CASE("manufactured solution: quick two-level order check") {
  const double T = 0.4;
  const double nu = 0.01;
  const double kappa = 0.0;
  double errors[2];
  int level = 0;
  for (const auto& [m, n] : {std::pair{5, 6}, std::pair{11, 12}}) {
    Problem p;
    p.sg = build_space_grid(1.0, 1.0, m, m);
    p.vg = build_velocity_grid(1.0, 1.0, 1, 1, 1, 1);
    p.weights = trapezoid_weights(p.vg);
    p.tau = T / n;
    p.coeffs = CoefficientSet::build(p.sg, p.vg, p.tau, nu);
    p.kappa = kappa;
    p.threads = 1;
    const test::Manufactured mms(p.sg, p.vg, nu, kappa);
    p.boundary = mms.boundary(p.tau);
    p.source = mms.source_fn();
    const SimulationResult r = run_simulation(p, mms.initial(), n);
    errors[level++] = mms.error_inf(r.final, T);
  }
  const double order = std::log2(errors[0] / errors[1]);
  CHECK(order >= 1.5);
}
