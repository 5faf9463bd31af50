#include "kinturb/grid.hpp"

#include "kinturb/errors.hpp"

namespace kinturb {

SpaceGrid build_space_grid(double L1, double L2, int M1, int M2) {
  if (!(L1 > 0.0) || !(L2 > 0.0))
    throw ConfigError("space grid: side lengths L1, L2 must be positive");
  if (M1 < 1 || M2 < 1)
    throw ConfigError("space grid: interior node counts M1, M2 must be >= 1");
  SpaceGrid g;
  g.L1 = L1;
  g.L2 = L2;
  g.M1 = M1;
  g.M2 = M2;
  g.h1 = L1 / (M1 + 1);
  g.h2 = L2 / (M2 + 1);
  return g;
}

VelocityGrid build_velocity_grid(double ah1, double ah2, int MR1, int PR1, int MR2,
                                 int PR2) {
  if (!(ah1 > 0.0) || !(ah2 > 0.0))
    throw ConfigError("velocity grid: steps ah1, ah2 must be positive");
  if (MR1 < 0 || PR1 < 0 || MR2 < 0 || PR2 < 0)
    throw ConfigError("velocity grid: node counts MR1, PR1, MR2, PR2 must be >= 0");
  VelocityGrid g;
  g.ah1 = ah1;
  g.ah2 = ah2;
  g.MR1 = MR1;
  g.PR1 = PR1;
  g.MR2 = MR2;
  g.PR2 = PR2;
  return g;
}

TimeGrid build_time_grid(double T, int N) {
  if (!(T > 0.0)) throw ConfigError("time grid: final time T must be positive");
  if (N < 1) throw ConfigError("time grid: step count N must be >= 1");
  TimeGrid g;
  g.T = T;
  g.N = N;
  g.tau = T / N;
  return g;
}

namespace {

double end_coeff(int l, int lo, int hi) {
  if (lo == hi) return 1.0;  // single node keeps the full step
  return (l == lo || l == hi) ? 0.5 : 1.0;
}

}  // namespace

QuadratureWeights trapezoid_weights(const VelocityGrid& vg) {
  std::vector<double> w(static_cast<size_t>(vg.count()));
  for (int l1 = -vg.MR1; l1 <= vg.PR1; ++l1) {
    const double c1 = end_coeff(l1, -vg.MR1, vg.PR1);
    for (int l2 = -vg.MR2; l2 <= vg.PR2; ++l2) {
      const double c2 = end_coeff(l2, -vg.MR2, vg.PR2);
      w[static_cast<size_t>(vg.vi(l1, l2))] = vg.ah1 * vg.ah2 * c1 * c2;
    }
  }
  return QuadratureWeights(vg, std::move(w));
}

}  // namespace kinturb
