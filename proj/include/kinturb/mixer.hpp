#pragma once

#include <span>
#include <vector>

#include "kinturb/field.hpp"
#include "kinturb/grid.hpp"

namespace kinturb {

/// Arguments of the mixer kernel for one velocity pair (alpha, beta) at a
/// fixed space point and time: the two densities and the Euclidean norms of
/// the two velocity nodes.
struct MixerInput {
  double rho_alpha = 0.0;
  double rho_beta = 0.0;
  double norm_alpha = 0.0;
  double norm_beta = 0.0;
};

/// The bounded odd ratio r(d) = -d / (1 + |d|); |r| < 1 and r is
/// 1-Lipschitz on the reals.
inline double mixing_ratio(double d) { return -d / (1.0 + std::fabs(d)); }

/// Pairwise mixer kernel M. With d = ||beta|| rho(beta) - ||alpha|| rho(alpha),
/// returns r(d) * rho(alpha) for d >= 0 and r(d) * rho(beta) for d < 0.
/// Exchanging the roles of alpha and beta negates the result exactly.
inline double mixer_kernel(const MixerInput& in) {
  const double d = in.norm_beta * in.rho_beta - in.norm_alpha * in.rho_alpha;
  const double r = -d / (1.0 + std::fabs(d));
  return d >= 0.0 ? r * in.rho_alpha : r * in.rho_beta;
}

/// The mixer term evaluated at every velocity node of one space node,
/// with the strength kappa already applied.
///
/// The weighted sum over velocity nodes vanishes up to roundoff: mixing
/// redistributes density between velocities, it never creates mass.
struct MixerField {
  std::vector<double> values;  // indexed by velocity node vi
  double kappa = 0.0;
};

/// Trapezoidal integral of the mixer kernel over the beta variable for one
/// per-velocity density slice. The beta sum runs in velocity-index order,
/// which keeps results bit-reproducible.
MixerField mixer_integral(std::span<const double> slice, const VelocityGrid& vg,
                          const QuadratureWeights& w, double kappa);

/// Evaluates the mixer term at every space node of a density field.
/// Space nodes are independent and processed in parallel.
void mixer_apply(const DensityField& u, const VelocityGrid& vg,
                 const QuadratureWeights& w, double kappa, int threads,
                 DensityField& out);

}  // namespace kinturb
