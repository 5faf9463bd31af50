#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kinturb/field.hpp"
#include "kinturb/grid.hpp"

namespace kinturb {

/// Stencil coefficients of the Crank-Nicolson time-step system for one
/// velocity node (alpha1, alpha2) = (ah1*l1, ah2*l2):
///
///   lambda_i = tau / h_i,  mu_i = lambda_i / h_i,
///   a_i = -lambda_i*alpha_i/4 - nu*mu_i/2,
///   b_i = +lambda_i*alpha_i/4 - nu*mu_i/2,
///   d   = 1 + nu*(mu1 + mu2),  d1 = 1 - nu*(mu1 + mu2).
///
/// The implicit operator applies (d; a1, b1, a2, b2) to levels n+1, the
/// explicit one applies (d1; -a1, -b1, -a2, -b2) to level n. Interior rows
/// of both operators sum to exactly 1 for any nu.
struct SchemeCoefficients {
  double a1 = 0.0;
  double b1 = 0.0;
  double a2 = 0.0;
  double b2 = 0.0;
  double d = 1.0;
  double d1 = 1.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double nu = 0.0;
};

SchemeCoefficients coefficients(int l1, int l2, const SpaceGrid& sg,
                                const VelocityGrid& vg, double tau, double nu);

/// Coefficients for every velocity node of a grid pair, indexed by vi.
class CoefficientSet {
 public:
  CoefficientSet() = default;
  static CoefficientSet build(const SpaceGrid& sg, const VelocityGrid& vg,
                              double tau, double nu);

  const SchemeCoefficients& operator[](int vi) const {
    return coeffs_[static_cast<size_t>(vi)];
  }
  const FieldShape& shape() const { return shape_; }
  int blocks() const { return static_cast<int>(coeffs_.size()); }

  /// Diagonal entry of the implicit operator (identical for every node).
  double d() const { return coeffs_.empty() ? 1.0 : coeffs_[0].d; }

 private:
  FieldShape shape_;
  std::vector<SchemeCoefficients> coeffs_;
};

/// Dirichlet data on the four sides of the space rectangle, as functions of
/// (time level n, tangential interior index j, velocity node (l1, l2)).
/// A missing side means zero data. Left/right sides are indexed by j = k2,
/// bottom/top by j = k1, both counted from the low corner.
struct BoundaryData {
  using Side = std::function<double(int n, int j, int l1, int l2)>;
  Side left;
  Side right;
  Side bottom;
  Side top;
  /// Highest valid time level, or -1 when unbounded.
  int max_level = -1;
};

/// Optional source term S(t, x1, x2, alpha(l1, l2)), used by verification
/// runs; the time step adds (tau/2) * (S^n + S^{n+1}) to the right-hand side.
using SourceFn = std::function<double(double t, double x1, double x2, int l1, int l2)>;

/// y = A u: implicit-side operator. Out-of-range neighbors contribute zero;
/// their known boundary values enter through the Dirichlet terms instead.
DensityField apply_A(const DensityField& u, const CoefficientSet& cs);
void apply_A_into(const DensityField& u, const CoefficientSet& cs, DensityField& y,
                  int threads = 1);

/// y = B u: explicit-side operator with stencil (d1; -a1, -b1, -a2, -b2).
DensityField apply_B(const DensityField& u, const CoefficientSet& cs);
void apply_B_into(const DensityField& u, const CoefficientSet& cs, DensityField& y,
                  int threads = 1);

/// Additive boundary contribution for the step from level n to n+1:
/// -a1*(L(n)+L(n+1)) at k1 = 0, -b1*(R(n)+R(n+1)) at k1 = M1-1, and the
/// analogous terms in the second dimension; contributions accumulate where
/// several sides meet.
DensityField dirichlet_terms(int n, const BoundaryData& bd, const CoefficientSet& cs);

/// Right-hand side of the time-step system:
/// B u^n + (tau/2) * (F_n + F_p [+ source_sum]) + dir, where F carries kappa
/// already and source_sum = S^n + S^{n+1} when a source term is active.
DensityField assemble_rhs(const DensityField& u_n, const CoefficientSet& cs,
                          const DensityField& F_n, const DensityField& F_p,
                          const DensityField& dir, double tau,
                          const DensityField* source_sum = nullptr, int threads = 1);

}  // namespace kinturb
