#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kinturb/field.hpp"
#include "kinturb/grid.hpp"
#include "kinturb/scheme.hpp"

namespace kinturb {

/// Scalar quantity on the interior space nodes, row-major with k1 fastest.
struct ScalarField {
  int m1 = 0;
  int m2 = 0;
  std::vector<double> v;

  static ScalarField zeros(int m1, int m2) {
    return {m1, m2, std::vector<double>(static_cast<size_t>(m1) * m2, 0.0)};
  }
  double& at(int k1, int k2) { return v[static_cast<size_t>(k2) * m1 + k1]; }
  double at(int k1, int k2) const { return v[static_cast<size_t>(k2) * m1 + k1]; }
};

/// Two-component quantity on the interior space nodes.
struct VectorField {
  int m1 = 0;
  int m2 = 0;
  std::vector<double> c1;
  std::vector<double> c2;

  static VectorField zeros(int m1, int m2) {
    const size_t n = static_cast<size_t>(m1) * m2;
    return {m1, m2, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  }
  size_t idx(int k1, int k2) const { return static_cast<size_t>(k2) * m1 + k1; }
};

/// Vector field with a per-node definedness mask (velocity is undefined
/// where the mass density vanishes).
struct MaskedVectorField {
  int m1 = 0;
  int m2 = 0;
  std::vector<double> c1;
  std::vector<double> c2;
  std::vector<std::uint8_t> defined;

  size_t idx(int k1, int k2) const { return static_cast<size_t>(k2) * m1 + k1; }
  bool is_defined(int k1, int k2) const { return defined[idx(k1, k2)] != 0; }
};

struct MaskedScalarField {
  int m1 = 0;
  int m2 = 0;
  std::vector<double> v;
  std::vector<std::uint8_t> defined;

  size_t idx(int k1, int k2) const { return static_cast<size_t>(k2) * m1 + k1; }
  bool is_defined(int k1, int k2) const { return defined[idx(k1, k2)] != 0; }
};

/// Mass density, impulse density, and velocity at one time level.
struct EulerFields {
  ScalarField rho;
  VectorField impulse;
  MaskedVectorField velocity;
};

/// Mass density rho(k) = kappa * sum_l w(l) * u[k, l].
ScalarField euler_density(const DensityField& u, const QuadratureWeights& w,
                          double kappa);

/// Impulse density p(k) = kappa * sum_l w(l) * alpha(l) * u[k, l].
VectorField euler_impulse(const DensityField& u, const VelocityGrid& vg,
                          const QuadratureWeights& w, double kappa);

/// v = p / rho where rho > eps_div; masked undefined elsewhere.
MaskedVectorField euler_velocity(const VectorField& p, const ScalarField& rho,
                                 double eps_div);

EulerFields compute_euler(const DensityField& u, const VelocityGrid& vg,
                          const QuadratureWeights& w, double kappa, double eps_div);

/// Inclusive index rectangle of interior space nodes.
struct IndexRect {
  int k1_lo = 0;
  int k1_hi = 0;
  int k2_lo = 0;
  int k2_hi = 0;
};

/// Componentwise trapezoid-weighted sum of the impulse density over the
/// region, scaled by the cell area h1*h2.
std::array<double, 2> region_impulse(const VectorField& p, const IndexRect& region,
                                     const SpaceGrid& sg);

/// Scalar quantity on all space nodes including the physical boundary ring:
/// indices i in [0, m+1], where i = k+1 for interior node k and i = 0 or
/// m+1 on the boundary.
struct ExtendedScalar {
  int m1 = 0;
  int m2 = 0;
  std::vector<double> v;

  static ExtendedScalar zeros(int m1, int m2) {
    return {m1, m2,
            std::vector<double>(static_cast<size_t>(m1 + 2) * (m2 + 2), 0.0)};
  }
  double& at(int i1, int i2) { return v[static_cast<size_t>(i2) * (m1 + 2) + i1]; }
  double at(int i1, int i2) const {
    return v[static_cast<size_t>(i2) * (m1 + 2) + i1];
  }
};

struct ExtendedVector {
  ExtendedScalar c1;
  ExtendedScalar c2;
};

/// Interior values plus the Dirichlet-implied boundary ring at time level n:
/// boundary-node density is the weighted velocity sum of the side's boundary
/// data; corner nodes take the average of the two adjacent sides' nearest
/// values.
ExtendedScalar extend_density(const ScalarField& interior, const BoundaryData& bd,
                              int n, const VelocityGrid& vg,
                              const QuadratureWeights& w, double kappa);
ExtendedVector extend_impulse(const VectorField& interior, const BoundaryData& bd,
                              int n, const VelocityGrid& vg,
                              const QuadratureWeights& w, double kappa);

/// Trapezoid integral over the space rectangle including boundary nodes.
double total_mass(const ExtendedScalar& rho, const SpaceGrid& sg);

/// One-step mass budget: mass change rate plus boundary fluxes of impulse
/// and of diffusive mass transport. The residual is the sum of the three
/// terms; for the continuous model it vanishes identically.
struct MassBudget {
  double mass = 0.0;
  double dm_dt = 0.0;
  double impulse_flux = 0.0;
  double diffusive_flux = 0.0;
  double residual = 0.0;
};

/// rho_n / rho_np1 are consecutive levels; p_mid is the time-average of the
/// impulse at those levels. Normal derivatives use one-sided second-order
/// differences from the boundary value and two interior layers; boundary
/// line integrals use the trapezoid rule along each side.
MassBudget mass_budget(const ExtendedScalar& rho_n, const ExtendedScalar& rho_np1,
                       const ExtendedVector& p_mid, const SpaceGrid& sg, double nu,
                       double tau);

/// Central-difference curl dv2/dx1 - dv1/dx2, defined at interior nodes
/// whose four neighbors are all defined.
MaskedScalarField vorticity(const MaskedVectorField& v, const SpaceGrid& sg);

/// v / |v| where defined and |v| > eps_div; masked otherwise.
MaskedVectorField unit_velocity_field(const MaskedVectorField& v, double eps_div);

}  // namespace kinturb
