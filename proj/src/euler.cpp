#include "kinturb/euler.hpp"

#include <cmath>
#include <stdexcept>

namespace kinturb {

namespace {

void check_shapes(const DensityField& u, int velocity_count) {
  if (u.shape().blocks() != velocity_count)
    throw std::invalid_argument("euler: velocity grid does not match field");
}

}  // namespace

ScalarField euler_density(const DensityField& u, const QuadratureWeights& w,
                          double kappa) {
  const FieldShape& shape = u.shape();
  if (static_cast<int>(w.values().size()) != shape.blocks())
    throw std::invalid_argument("euler_density: weights do not match field");
  ScalarField rho = ScalarField::zeros(shape.m1, shape.m2);
  const long bs = shape.block_size();
  for (int v = 0; v < shape.blocks(); ++v) {
    const double wv = w.w_vi(v);
    const auto block = u.block(v);
    for (long i = 0; i < bs; ++i) rho.v[static_cast<size_t>(i)] += wv * block[i];
  }
  for (double& x : rho.v) x *= kappa;
  return rho;
}

VectorField euler_impulse(const DensityField& u, const VelocityGrid& vg,
                          const QuadratureWeights& w, double kappa) {
  check_shapes(u, vg.count());
  const FieldShape& shape = u.shape();
  VectorField p = VectorField::zeros(shape.m1, shape.m2);
  const long bs = shape.block_size();
  for (int v = 0; v < shape.blocks(); ++v) {
    const double wv = w.w_vi(v);
    const double a1 = vg.alpha1(vg.l1_of(v));
    const double a2 = vg.alpha2(vg.l2_of(v));
    const auto block = u.block(v);
    for (long i = 0; i < bs; ++i) {
      p.c1[static_cast<size_t>(i)] += wv * a1 * block[i];
      p.c2[static_cast<size_t>(i)] += wv * a2 * block[i];
    }
  }
  for (size_t i = 0; i < p.c1.size(); ++i) {
    p.c1[i] *= kappa;
    p.c2[i] *= kappa;
  }
  return p;
}

MaskedVectorField euler_velocity(const VectorField& p, const ScalarField& rho,
                                 double eps_div) {
  if (p.m1 != rho.m1 || p.m2 != rho.m2)
    throw std::invalid_argument("euler_velocity: shape mismatch");
  MaskedVectorField v;
  v.m1 = p.m1;
  v.m2 = p.m2;
  const size_t n = p.c1.size();
  v.c1.assign(n, 0.0);
  v.c2.assign(n, 0.0);
  v.defined.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    if (rho.v[i] > eps_div) {
      v.c1[i] = p.c1[i] / rho.v[i];
      v.c2[i] = p.c2[i] / rho.v[i];
      v.defined[i] = 1;
    }
  }
  return v;
}

EulerFields compute_euler(const DensityField& u, const VelocityGrid& vg,
                          const QuadratureWeights& w, double kappa, double eps_div) {
  EulerFields out;
  out.rho = euler_density(u, w, kappa);
  out.impulse = euler_impulse(u, vg, w, kappa);
  out.velocity = euler_velocity(out.impulse, out.rho, eps_div);
  return out;
}

std::array<double, 2> region_impulse(const VectorField& p, const IndexRect& region,
                                     const SpaceGrid& sg) {
  if (region.k1_lo < 0 || region.k2_lo < 0 || region.k1_hi >= p.m1 ||
      region.k2_hi >= p.m2 || region.k1_lo > region.k1_hi ||
      region.k2_lo > region.k2_hi)
    throw std::invalid_argument("region_impulse: empty or out-of-range region");

  auto cw = [](int k, int lo, int hi) {
    if (lo == hi) return 1.0;
    return (k == lo || k == hi) ? 0.5 : 1.0;
  };
  double s1 = 0.0;
  double s2 = 0.0;
  for (int k2 = region.k2_lo; k2 <= region.k2_hi; ++k2) {
    const double c2 = cw(k2, region.k2_lo, region.k2_hi);
    for (int k1 = region.k1_lo; k1 <= region.k1_hi; ++k1) {
      const double c = c2 * cw(k1, region.k1_lo, region.k1_hi);
      s1 += c * p.c1[p.idx(k1, k2)];
      s2 += c * p.c2[p.idx(k1, k2)];
    }
  }
  return {s1 * sg.h1 * sg.h2, s2 * sg.h1 * sg.h2};
}

namespace {

// Weighted velocity sum of one side's boundary data at level n; weight_fn
// selects the plain weight (density) or an alpha-weighted variant (impulse).
template <class WeightFn>
std::vector<double> side_moment(const BoundaryData::Side& side, int n, int count,
                                const VelocityGrid& vg, const QuadratureWeights& w,
                                double kappa, WeightFn&& weight_fn) {
  std::vector<double> out(static_cast<size_t>(count), 0.0);
  if (!side) return out;
  for (int j = 0; j < count; ++j) {
    double s = 0.0;
    for (int v = 0; v < vg.count(); ++v) {
      const int l1 = vg.l1_of(v);
      const int l2 = vg.l2_of(v);
      s += w.w_vi(v) * weight_fn(l1, l2) * side(n, j, l1, l2);
    }
    out[static_cast<size_t>(j)] = kappa * s;
  }
  return out;
}

template <class WeightFn>
ExtendedScalar extend_moment(const std::vector<double>& interior, int m1, int m2,
                             const BoundaryData& bd, int n, const VelocityGrid& vg,
                             const QuadratureWeights& w, double kappa,
                             WeightFn&& weight_fn) {
  ExtendedScalar ext = ExtendedScalar::zeros(m1, m2);
  for (int k2 = 0; k2 < m2; ++k2)
    for (int k1 = 0; k1 < m1; ++k1)
      ext.at(k1 + 1, k2 + 1) = interior[static_cast<size_t>(k2) * m1 + k1];

  const auto left = side_moment(bd.left, n, m2, vg, w, kappa, weight_fn);
  const auto right = side_moment(bd.right, n, m2, vg, w, kappa, weight_fn);
  const auto bottom = side_moment(bd.bottom, n, m1, vg, w, kappa, weight_fn);
  const auto top = side_moment(bd.top, n, m1, vg, w, kappa, weight_fn);

  for (int k2 = 0; k2 < m2; ++k2) {
    ext.at(0, k2 + 1) = left[static_cast<size_t>(k2)];
    ext.at(m1 + 1, k2 + 1) = right[static_cast<size_t>(k2)];
  }
  for (int k1 = 0; k1 < m1; ++k1) {
    ext.at(k1 + 1, 0) = bottom[static_cast<size_t>(k1)];
    ext.at(k1 + 1, m2 + 1) = top[static_cast<size_t>(k1)];
  }
  // Corners: average of the two adjacent sides' nearest values.
  ext.at(0, 0) = 0.5 * (left.front() + bottom.front());
  ext.at(m1 + 1, 0) = 0.5 * (right.front() + bottom.back());
  ext.at(0, m2 + 1) = 0.5 * (left.back() + top.front());
  ext.at(m1 + 1, m2 + 1) = 0.5 * (right.back() + top.back());
  return ext;
}

}  // namespace

ExtendedScalar extend_density(const ScalarField& interior, const BoundaryData& bd,
                              int n, const VelocityGrid& vg,
                              const QuadratureWeights& w, double kappa) {
  return extend_moment(interior.v, interior.m1, interior.m2, bd, n, vg, w, kappa,
                       [](int, int) { return 1.0; });
}

ExtendedVector extend_impulse(const VectorField& interior, const BoundaryData& bd,
                              int n, const VelocityGrid& vg,
                              const QuadratureWeights& w, double kappa) {
  ExtendedVector out;
  out.c1 = extend_moment(interior.c1, interior.m1, interior.m2, bd, n, vg, w, kappa,
                         [&vg](int l1, int) { return vg.alpha1(l1); });
  out.c2 = extend_moment(interior.c2, interior.m1, interior.m2, bd, n, vg, w, kappa,
                         [&vg](int, int l2) { return vg.alpha2(l2); });
  return out;
}

double total_mass(const ExtendedScalar& rho, const SpaceGrid& sg) {
  auto cw = [](int i, int hi) { return (i == 0 || i == hi) ? 0.5 : 1.0; };
  const int n1 = rho.m1 + 1;
  const int n2 = rho.m2 + 1;
  double s = 0.0;
  for (int i2 = 0; i2 <= n2; ++i2) {
    const double c2 = cw(i2, n2);
    for (int i1 = 0; i1 <= n1; ++i1) s += c2 * cw(i1, n1) * rho.at(i1, i2);
  }
  return s * sg.h1 * sg.h2;
}

namespace {

// Outward normal derivative at a boundary node by a one-sided difference
// into the domain: second order when two interior layers exist.
double outward_gradient(double rho0, double rho1, double rho2, double h, int layers) {
  if (layers >= 2) return -(-3.0 * rho0 + 4.0 * rho1 - rho2) / (2.0 * h);
  return -(rho1 - rho0) / h;
}

}  // namespace

MassBudget mass_budget(const ExtendedScalar& rho_n, const ExtendedScalar& rho_np1,
                       const ExtendedVector& p_mid, const SpaceGrid& sg, double nu,
                       double tau) {
  if (rho_n.m1 != rho_np1.m1 || rho_n.m2 != rho_np1.m2 ||
      p_mid.c1.m1 != rho_n.m1 || p_mid.c1.m2 != rho_n.m2)
    throw std::invalid_argument("mass_budget: shape mismatch");
  if (!(tau > 0.0)) throw std::invalid_argument("mass_budget: tau must be > 0");

  const int m1 = rho_n.m1;
  const int m2 = rho_n.m2;
  MassBudget out;
  const double mass_n = total_mass(rho_n, sg);
  out.mass = total_mass(rho_np1, sg);
  out.dm_dt = (out.mass - mass_n) / tau;

  auto cw = [](int i, int hi) { return (i == 0 || i == hi) ? 0.5 : 1.0; };
  auto rho_mid = [&](int i1, int i2) {
    return 0.5 * (rho_n.at(i1, i2) + rho_np1.at(i1, i2));
  };

  // Boundary trapezoid quadrature of n . p over the four sides.
  double flux_p = 0.0;
  for (int i2 = 0; i2 <= m2 + 1; ++i2) {
    const double c = cw(i2, m2 + 1) * sg.h2;
    flux_p += c * (p_mid.c1.at(m1 + 1, i2) - p_mid.c1.at(0, i2));
  }
  for (int i1 = 0; i1 <= m1 + 1; ++i1) {
    const double c = cw(i1, m1 + 1) * sg.h1;
    flux_p += c * (p_mid.c2.at(i1, m2 + 1) - p_mid.c2.at(i1, 0));
  }
  out.impulse_flux = flux_p;

  // Boundary trapezoid quadrature of n . grad(rho) at the midpoint level.
  double flux_d = 0.0;
  for (int i2 = 0; i2 <= m2 + 1; ++i2) {
    const double c = cw(i2, m2 + 1) * sg.h2;
    flux_d += c * outward_gradient(rho_mid(0, i2), rho_mid(1, i2), rho_mid(2, i2),
                                   sg.h1, m1);
    flux_d += c * outward_gradient(rho_mid(m1 + 1, i2), rho_mid(m1, i2),
                                   rho_mid(m1 - 1, i2), sg.h1, m1);
  }
  for (int i1 = 0; i1 <= m1 + 1; ++i1) {
    const double c = cw(i1, m1 + 1) * sg.h1;
    flux_d += c * outward_gradient(rho_mid(i1, 0), rho_mid(i1, 1), rho_mid(i1, 2),
                                   sg.h2, m2);
    flux_d += c * outward_gradient(rho_mid(i1, m2 + 1), rho_mid(i1, m2),
                                   rho_mid(i1, m2 - 1), sg.h2, m2);
  }
  out.diffusive_flux = nu * flux_d;

  out.residual = out.dm_dt + out.impulse_flux + out.diffusive_flux;
  return out;
}

MaskedScalarField vorticity(const MaskedVectorField& v, const SpaceGrid& sg) {
  MaskedScalarField w;
  w.m1 = v.m1;
  w.m2 = v.m2;
  const size_t n = v.c1.size();
  w.v.assign(n, 0.0);
  w.defined.assign(n, 0);
  for (int k2 = 1; k2 + 1 < v.m2; ++k2) {
    for (int k1 = 1; k1 + 1 < v.m1; ++k1) {
      if (!v.is_defined(k1 - 1, k2) || !v.is_defined(k1 + 1, k2) ||
          !v.is_defined(k1, k2 - 1) || !v.is_defined(k1, k2 + 1))
        continue;
      const double dv2_dx1 =
          (v.c2[v.idx(k1 + 1, k2)] - v.c2[v.idx(k1 - 1, k2)]) / (2.0 * sg.h1);
      const double dv1_dx2 =
          (v.c1[v.idx(k1, k2 + 1)] - v.c1[v.idx(k1, k2 - 1)]) / (2.0 * sg.h2);
      w.v[w.idx(k1, k2)] = dv2_dx1 - dv1_dx2;
      w.defined[w.idx(k1, k2)] = 1;
    }
  }
  return w;
}

MaskedVectorField unit_velocity_field(const MaskedVectorField& v, double eps_div) {
  MaskedVectorField u;
  u.m1 = v.m1;
  u.m2 = v.m2;
  const size_t n = v.c1.size();
  u.c1.assign(n, 0.0);
  u.c2.assign(n, 0.0);
  u.defined.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    if (!v.defined[i]) continue;
    const double norm = std::sqrt(v.c1[i] * v.c1[i] + v.c2[i] * v.c2[i]);
    if (norm > eps_div) {
      u.c1[i] = v.c1[i] / norm;
      u.c2[i] = v.c2[i] / norm;
      u.defined[i] = 1;
    }
  }
  return u;
}

}  // namespace kinturb
