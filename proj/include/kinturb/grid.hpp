#pragma once

#include <cmath>
#include <vector>

namespace kinturb {

/// Uniform grid over the space rectangle [0, L1] x [0, L2].
///
/// The unknowns live at the M1 x M2 interior nodes; the physical boundary
/// carries Dirichlet data and is not part of the unknown vector. Interior
/// node (k1, k2), ki in [0, Mi), sits at xi = hi * (ki + 1) with
/// hi = Li / (Mi + 1), so xi = 0 and xi = Li are the boundary coordinates.
struct SpaceGrid {
  double L1 = 0.0;
  double L2 = 0.0;
  int M1 = 0;
  int M2 = 0;
  double h1 = 0.0;
  double h2 = 0.0;

  double x1(int k1) const { return h1 * (k1 + 1); }
  double x2(int k2) const { return h2 * (k2 + 1); }

  /// Nearest interior index to a coordinate, clamped to the index range.
  int nearest_k1(double x) const { return clamp_index(std::lround(x / h1) - 1, M1); }
  int nearest_k2(double x) const { return clamp_index(std::lround(x / h2) - 1, M2); }

 private:
  static int clamp_index(long k, int m) {
    if (k < 0) return 0;
    if (k >= m) return m - 1;
    return static_cast<int>(k);
  }
};

/// Uniform grid over the velocity rectangle A = [D1, G1] x [D2, G2].
///
/// Node (l1, l2) with lj in [-MRj, PRj] sits at alpha_j = ahj * lj, so
/// Dj = -ahj * MRj and Gj = ahj * PRj; there are nj = MRj + PRj + 1 nodes
/// per dimension and n1 * n2 velocity nodes in total. Velocity nodes are
/// enumerated row-major in (l1, l2) by `vi`.
struct VelocityGrid {
  double ah1 = 0.0;
  double ah2 = 0.0;
  int MR1 = 0;
  int PR1 = 0;
  int MR2 = 0;
  int PR2 = 0;

  int n1() const { return MR1 + PR1 + 1; }
  int n2() const { return MR2 + PR2 + 1; }
  int count() const { return n1() * n2(); }

  double D1() const { return -ah1 * MR1; }
  double G1() const { return ah1 * PR1; }
  double D2() const { return -ah2 * MR2; }
  double G2() const { return ah2 * PR2; }

  double alpha1(int l1) const { return ah1 * l1; }
  double alpha2(int l2) const { return ah2 * l2; }
  double norm(int l1, int l2) const { return std::hypot(alpha1(l1), alpha2(l2)); }

  /// Linear index of velocity node (l1, l2).
  int vi(int l1, int l2) const { return (l1 + MR1) * n2() + (l2 + MR2); }
  int l1_of(int vi) const { return vi / n2() - MR1; }
  int l2_of(int vi) const { return vi % n2() - MR2; }

  bool contains(int l1, int l2) const {
    return l1 >= -MR1 && l1 <= PR1 && l2 >= -MR2 && l2 <= PR2;
  }

  int nearest_l1(double a) const { return clamp_index(std::lround(a / ah1), -MR1, PR1); }
  int nearest_l2(double a) const { return clamp_index(std::lround(a / ah2), -MR2, PR2); }

 private:
  static int clamp_index(long l, int lo, int hi) {
    if (l < lo) return lo;
    if (l > hi) return hi;
    return static_cast<int>(l);
  }
};

/// Uniform grid over the time interval [0, T]: t_n = n * tau, tau = T / N.
struct TimeGrid {
  double T = 0.0;
  int N = 0;
  double tau = 0.0;

  double t(int n) const { return tau * n; }
};

/// Trapezoidal quadrature weights over the velocity rectangle.
///
/// w(l1, l2) = ah1 * ah2 * c(l1) * c(l2) with c = 1/2 at an end index and 1
/// otherwise. A dimension with a single node keeps the full step as its
/// weight so degenerate grids still integrate to something useful.
class QuadratureWeights {
 public:
  QuadratureWeights() = default;
  QuadratureWeights(VelocityGrid vg, std::vector<double> w)
      : vg_(vg), w_(std::move(w)) {}

  double w(int l1, int l2) const { return w_[vg_.vi(l1, l2)]; }
  double w_vi(int vi) const { return w_[vi]; }
  const std::vector<double>& values() const { return w_; }

  /// Sum of all weights (the measure assigned to the velocity rectangle).
  double sum() const {
    double s = 0.0;
    for (double v : w_) s += v;
    return s;
  }

 private:
  VelocityGrid vg_;
  std::vector<double> w_;
};

SpaceGrid build_space_grid(double L1, double L2, int M1, int M2);
VelocityGrid build_velocity_grid(double ah1, double ah2, int MR1, int PR1, int MR2,
                                 int PR2);
TimeGrid build_time_grid(double T, int N);
QuadratureWeights trapezoid_weights(const VelocityGrid& vg);

}  // namespace kinturb
