#include <cmath>
#include <random>

#include "doctest.h"
#include "kinturb/grid.hpp"
#include "kinturb/scheme.hpp"
#include "support/oracles.hpp"

using namespace kinturb;

namespace {

// h1 = h2 = 0.5 and a 3x3 velocity grid with ah = 1.
SpaceGrid half_grid() { return build_space_grid(1.5, 1.5, 2, 2); }
VelocityGrid unit_velocity() { return build_velocity_grid(1.0, 1.0, 1, 1, 1, 1); }

DensityField random_field(const FieldShape& shape, unsigned seed) {
  DensityField u(shape);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (double& v : u.data()) v = dist(rng);
  return u;
}

}  // namespace

TEST_CASE("coefficients: direct values") {
  const SpaceGrid sg = half_grid();
  const VelocityGrid vg = unit_velocity();

  const SchemeCoefficients c0 = coefficients(0, 0, sg, vg, 0.1, 0.05);
  CHECK(c0.lambda1 == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(c0.mu1 == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(c0.a1 == doctest::Approx(-0.01).epsilon(1e-12));
  CHECK(c0.b1 == doctest::Approx(-0.01).epsilon(1e-12));
  CHECK(c0.a2 == doctest::Approx(-0.01).epsilon(1e-12));
  CHECK(c0.b2 == doctest::Approx(-0.01).epsilon(1e-12));
  CHECK(c0.d == doctest::Approx(1.04).epsilon(1e-14));
  CHECK(c0.d1 == doctest::Approx(0.96).epsilon(1e-14));

  const SchemeCoefficients c1 = coefficients(1, 0, sg, vg, 0.1, 0.05);
  CHECK(c1.a1 == doctest::Approx(-0.06).epsilon(1e-12));
  CHECK(c1.b1 == doctest::Approx(0.04).epsilon(1e-12));

  const SchemeCoefficients adv = coefficients(1, 1, sg, vg, 0.1, 0.0);
  CHECK(adv.d == 1.0);
  CHECK(adv.d1 == 1.0);
  CHECK(adv.a1 == doctest::Approx(-0.05).epsilon(1e-14));
  CHECK(adv.b1 == doctest::Approx(0.05).epsilon(1e-14));
}

TEST_CASE("coefficients: identities hold for every velocity node") {
  const SpaceGrid sg = build_space_grid(2.0, 1.0, 5, 4);
  const VelocityGrid vg = build_velocity_grid(0.4, 0.9, 2, 1, 0, 2);
  const double tau = 0.07;
  const double nu = 0.013;
  for (int l1 = -vg.MR1; l1 <= vg.PR1; ++l1) {
    for (int l2 = -vg.MR2; l2 <= vg.PR2; ++l2) {
      const SchemeCoefficients c = coefficients(l1, l2, sg, vg, tau, nu);
      CHECK(c.d + c.d1 == doctest::Approx(2.0).epsilon(1e-15));
      CHECK(c.a1 + c.b1 == doctest::Approx(-nu * c.mu1).epsilon(1e-13));
      CHECK(c.a2 + c.b2 == doctest::Approx(-nu * c.mu2).epsilon(1e-13));
      CHECK(c.a1 - c.b1 ==
            doctest::Approx(-c.lambda1 * vg.alpha1(l1) / 2.0).epsilon(1e-13));
      // interior row sums of both operators are exactly one
      CHECK(c.d + c.a1 + c.b1 + c.a2 + c.b2 == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(c.d1 - (c.a1 + c.b1 + c.a2 + c.b2) ==
            doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(coefficients(0, 0, sg, vg, 0.0, nu), std::invalid_argument);
  CHECK_THROWS_AS(coefficients(0, 0, sg, vg, 0.1, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(coefficients(9, 0, sg, vg, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("apply_A / apply_B: single space node reduces to the diagonal") {
  const SpaceGrid sg = build_space_grid(1.0, 1.0, 1, 1);
  const VelocityGrid vg = unit_velocity();
  const CoefficientSet cs = CoefficientSet::build(sg, vg, 0.1, 0.05);
  DensityField u = random_field(cs.shape(), 3);
  const DensityField ya = apply_A(u, cs);
  const DensityField yb = apply_B(u, cs);
  for (int v = 0; v < vg.count(); ++v) {
    CHECK(ya.block(v)[0] == doctest::Approx(cs[v].d * u.block(v)[0]).epsilon(1e-15));
    CHECK(yb.block(v)[0] == doctest::Approx(cs[v].d1 * u.block(v)[0]).epsilon(1e-15));
  }
}

TEST_CASE("apply_A / apply_B: constant field is preserved at interior rows") {
  const SpaceGrid sg = build_space_grid(1.0, 1.0, 5, 5);
  const VelocityGrid vg = unit_velocity();
  for (double nu : {0.0, 0.03}) {
    const CoefficientSet cs = CoefficientSet::build(sg, vg, 0.05, nu);
    DensityField u(cs.shape());
    u.fill(2.5);
    const DensityField ya = apply_A(u, cs);
    const DensityField yb = apply_B(u, cs);
    for (int v = 0; v < vg.count(); ++v) {
      for (int k2 = 1; k2 + 1 < sg.M2; ++k2) {
        for (int k1 = 1; k1 + 1 < sg.M1; ++k1) {
          CHECK(ya.at(k1, k2, vg.l1_of(v), vg.l2_of(v)) ==
                doctest::Approx(2.5).epsilon(1e-14));
          CHECK(yb.at(k1, k2, vg.l1_of(v), vg.l2_of(v)) ==
                doctest::Approx(2.5).epsilon(1e-14));
        }
      }
    }
  }
}

TEST_CASE("apply_A / apply_B: match the dense block matrices") {
  const SpaceGrid sg = build_space_grid(1.2, 0.9, 3, 3);
  const VelocityGrid vg = unit_velocity();
  const CoefficientSet cs = CoefficientSet::build(sg, vg, 0.08, 0.02);
  const DensityField u = random_field(cs.shape(), 17);

  const auto dense_a = test::dense_A(cs);
  const auto dense_b = test::dense_B(cs);
  const auto ya_dense = test::matvec(dense_a, u.data());
  const auto yb_dense = test::matvec(dense_b, u.data());
  const DensityField ya = apply_A(u, cs);
  const DensityField yb = apply_B(u, cs);
  for (size_t i = 0; i < ya_dense.size(); ++i) {
    CHECK(std::fabs(ya.data()[i] - ya_dense[i]) <= 1e-14);
    CHECK(std::fabs(yb.data()[i] - yb_dense[i]) <= 1e-14);
  }

  // A + B acts as 2 I on interior rows
  for (int v = 0; v < vg.count(); ++v)
    for (int k2 = 1; k2 + 1 < sg.M2; ++k2)
      for (int k1 = 1; k1 + 1 < sg.M1; ++k1)
        CHECK(ya.at(k1, k2, vg.l1_of(v), vg.l2_of(v)) +
                  yb.at(k1, k2, vg.l1_of(v), vg.l2_of(v)) ==
              doctest::Approx(2.0 * u.at(k1, k2, vg.l1_of(v), vg.l2_of(v)))
                  .epsilon(1e-13));
}

TEST_CASE("apply: shape mismatch is rejected") {
  const SpaceGrid sg = build_space_grid(1.0, 1.0, 3, 3);
  const VelocityGrid vg = unit_velocity();
  const CoefficientSet cs = CoefficientSet::build(sg, vg, 0.1, 0.0);
  DensityField wrong(FieldShape{2, 2, 1, 1, 1, 1});
  CHECK_THROWS_AS(apply_A(wrong, cs), std::invalid_argument);
}

TEST_CASE("dense oracle: interior row sums are exactly one") {
  const SpaceGrid sg = build_space_grid(1.0, 1.0, 4, 3);
  const VelocityGrid vg = build_velocity_grid(0.7, 0.7, 1, 1, 1, 1);
  const CoefficientSet cs = CoefficientSet::build(sg, vg, 0.06, 0.04);
  const auto a = test::dense_A(cs);
  const auto b = test::dense_B(cs);
  const int bs = sg.M1 * sg.M2;
  for (int v = 0; v < vg.count(); ++v) {
    for (int k2 = 1; k2 + 1 < sg.M2; ++k2) {
      for (int k1 = 1; k1 + 1 < sg.M1; ++k1) {
        const int row = v * bs + k2 * sg.M1 + k1;
        double sa = 0.0, sb = 0.0;
        for (int j = 0; j < a.n; ++j) {
          sa += a.at(row, j);
          sb += b.at(row, j);
        }
        CHECK(sa == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(sb == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("dirichlet terms: zero data, single side, corner accumulation") {
  const SpaceGrid sg = half_grid();  // 2x2 interior
  const VelocityGrid vg = unit_velocity();
  const CoefficientSet cs = CoefficientSet::build(sg, vg, 0.1, 0.05);
  // velocity node (1, 0): a1 = -0.06, b1 = 0.04, a2 = -0.01, b2 = -0.01
  const int l1 = 1, l2 = 0;

  SUBCASE("all sides zero") {
    BoundaryData bd;
    const DensityField dir = dirichlet_terms(0, bd, cs);
    for (double v : dir.data()) CHECK(v == 0.0);
  }

  SUBCASE("constant left side") {
    BoundaryData bd;
    bd.left = [](int, int, int, int) { return 1.0; };
    const DensityField dir = dirichlet_terms(3, bd, cs);
    for (int k2 = 0; k2 < sg.M2; ++k2) {
      CHECK(dir.at(0, k2, l1, l2) == doctest::Approx(0.12).epsilon(1e-12));
      CHECK(dir.at(1, k2, l1, l2) == 0.0);
    }
  }

  SUBCASE("left and bottom accumulate at the corner") {
    BoundaryData bd;
    bd.left = [](int, int, int, int) { return 1.0; };
    bd.bottom = [](int, int, int, int) { return 1.0; };
    const DensityField dir = dirichlet_terms(0, bd, cs);
    const SchemeCoefficients& c = cs[vg.vi(l1, l2)];
    CHECK(dir.at(0, 0, l1, l2) ==
          doctest::Approx(-2.0 * c.a1 - 2.0 * c.a2).epsilon(1e-12));
    CHECK(dir.at(1, 0, l1, l2) == doctest::Approx(-2.0 * c.a2).epsilon(1e-12));
    CHECK(dir.at(0, 1, l1, l2) == doctest::Approx(-2.0 * c.a1).epsilon(1e-12));
  }

  SUBCASE("time level bounds are enforced") {
    BoundaryData bd;
    bd.max_level = 5;
    CHECK_THROWS_AS(dirichlet_terms(-1, bd, cs), std::invalid_argument);
    CHECK_THROWS_AS(dirichlet_terms(5, bd, cs), std::invalid_argument);
    CHECK_NOTHROW(dirichlet_terms(4, bd, cs));
  }
}

TEST_CASE("assemble_rhs: zero inputs, linear case, recomposition") {
  const SpaceGrid sg = build_space_grid(1.0, 1.0, 3, 2);
  const VelocityGrid vg = unit_velocity();
  const CoefficientSet cs = CoefficientSet::build(sg, vg, 0.09, 0.03);
  const double tau = 0.09;

  SUBCASE("all zero") {
    DensityField zero(cs.shape());
    const DensityField rhs = assemble_rhs(zero, cs, zero, zero, zero, tau);
    for (double v : rhs.data()) CHECK(v == 0.0);
  }

  SUBCASE("no mixer reduces to B u + dir") {
    const DensityField u = random_field(cs.shape(), 5);
    DensityField zero(cs.shape());
    BoundaryData bd;
    bd.left = [](int n, int j, int, int) { return 0.1 * n + 0.01 * j; };
    const DensityField dir = dirichlet_terms(2, bd, cs);
    const DensityField rhs = assemble_rhs(u, cs, zero, zero, dir, tau);
    const DensityField bu = apply_B(u, cs);
    for (size_t i = 0; i < rhs.data().size(); ++i)
      CHECK(rhs.data()[i] ==
            doctest::Approx(bu.data()[i] + dir.data()[i]).epsilon(1e-14));
  }

  SUBCASE("matches independent dense recomposition") {
    const DensityField u = random_field(cs.shape(), 6);
    const DensityField fn = random_field(cs.shape(), 7);
    const DensityField fp = random_field(cs.shape(), 8);
    BoundaryData bd;
    bd.top = [](int n, int j, int l1, int) { return 0.05 * n + 0.02 * j + 0.1 * l1; };
    const DensityField dir = dirichlet_terms(1, bd, cs);
    const DensityField rhs = assemble_rhs(u, cs, fn, fp, dir, tau);

    const auto bu = test::matvec(test::dense_B(cs), u.data());
    for (size_t i = 0; i < rhs.data().size(); ++i) {
      const double expected = bu[i] + 0.5 * tau * (fn.data()[i] + fp.data()[i]) +
                              dir.data()[i];
      CHECK(std::fabs(rhs.data()[i] - expected) <= 1e-14);
    }
  }

  SUBCASE("shape mismatch is rejected") {
    DensityField zero(cs.shape());
    DensityField wrong(FieldShape{1, 1, 1, 1, 1, 1});
    CHECK_THROWS_AS(assemble_rhs(zero, cs, wrong, zero, zero, tau),
                    std::invalid_argument);
  }
}
