#include "kinturb/scheme.hpp"

#include <stdexcept>

#include "kinturb/parallel.hpp"

namespace kinturb {

SchemeCoefficients coefficients(int l1, int l2, const SpaceGrid& sg,
                                const VelocityGrid& vg, double tau, double nu) {
  if (!(tau > 0.0)) throw std::invalid_argument("coefficients: tau must be > 0");
  if (!(nu >= 0.0)) throw std::invalid_argument("coefficients: nu must be >= 0");
  if (!vg.contains(l1, l2))
    throw std::invalid_argument("coefficients: velocity index out of range");

  SchemeCoefficients c;
  c.nu = nu;
  c.lambda1 = tau / sg.h1;
  c.lambda2 = tau / sg.h2;
  c.mu1 = c.lambda1 / sg.h1;
  c.mu2 = c.lambda2 / sg.h2;
  const double alpha1 = vg.alpha1(l1);
  const double alpha2 = vg.alpha2(l2);
  c.a1 = -c.lambda1 * alpha1 / 4.0 - nu * c.mu1 / 2.0;
  c.b1 = c.lambda1 * alpha1 / 4.0 - nu * c.mu1 / 2.0;
  c.a2 = -c.lambda2 * alpha2 / 4.0 - nu * c.mu2 / 2.0;
  c.b2 = c.lambda2 * alpha2 / 4.0 - nu * c.mu2 / 2.0;
  const double visc = nu * (c.mu1 + c.mu2);
  c.d = 1.0 + visc;
  c.d1 = 1.0 - visc;
  return c;
}

CoefficientSet CoefficientSet::build(const SpaceGrid& sg, const VelocityGrid& vg,
                                     double tau, double nu) {
  CoefficientSet cs;
  cs.shape_ = FieldShape::of(sg, vg);
  cs.coeffs_.resize(static_cast<size_t>(vg.count()));
  for (int l1 = -vg.MR1; l1 <= vg.PR1; ++l1)
    for (int l2 = -vg.MR2; l2 <= vg.PR2; ++l2)
      cs.coeffs_[static_cast<size_t>(vg.vi(l1, l2))] =
          coefficients(l1, l2, sg, vg, tau, nu);
  return cs;
}

namespace {

enum class Op { A, B };

template <Op op>
void apply_stencil(const DensityField& u, const CoefficientSet& cs, DensityField& y,
                   int threads) {
  if (!(u.shape() == cs.shape()))
    throw std::invalid_argument("apply: field shape does not match coefficients");
  if (!(y.shape() == u.shape()))
    throw std::invalid_argument("apply: output shape does not match input");
  if (&u == &y) throw std::invalid_argument("apply: in-place application not supported");

  const int m1 = u.shape().m1;
  const int m2 = u.shape().m2;
  parallel_for(cs.blocks(), threads, [&](long lo, long hi) {
    for (long v = lo; v < hi; ++v) {
      const SchemeCoefficients& c = cs[static_cast<int>(v)];
      const double diag = op == Op::A ? c.d : c.d1;
      const double c1l = op == Op::A ? c.a1 : -c.a1;
      const double c1r = op == Op::A ? c.b1 : -c.b1;
      const double c2l = op == Op::A ? c.a2 : -c.a2;
      const double c2r = op == Op::A ? c.b2 : -c.b2;
      const auto in = u.block(static_cast<int>(v));
      const auto out = y.block(static_cast<int>(v));
      for (int k2 = 0; k2 < m2; ++k2) {
        for (int k1 = 0; k1 < m1; ++k1) {
          const long i = static_cast<long>(k2) * m1 + k1;
          double s = diag * in[i];
          if (k1 > 0) s += c1l * in[i - 1];
          if (k1 + 1 < m1) s += c1r * in[i + 1];
          if (k2 > 0) s += c2l * in[i - m1];
          if (k2 + 1 < m2) s += c2r * in[i + m1];
          out[i] = s;
        }
      }
    }
  });
}

}  // namespace

void apply_A_into(const DensityField& u, const CoefficientSet& cs, DensityField& y,
                  int threads) {
  apply_stencil<Op::A>(u, cs, y, threads);
}

void apply_B_into(const DensityField& u, const CoefficientSet& cs, DensityField& y,
                  int threads) {
  apply_stencil<Op::B>(u, cs, y, threads);
}

DensityField apply_A(const DensityField& u, const CoefficientSet& cs) {
  DensityField y(u.shape());
  apply_A_into(u, cs, y);
  return y;
}

DensityField apply_B(const DensityField& u, const CoefficientSet& cs) {
  DensityField y(u.shape());
  apply_B_into(u, cs, y);
  return y;
}

DensityField dirichlet_terms(int n, const BoundaryData& bd, const CoefficientSet& cs) {
  if (n < 0 || (bd.max_level >= 0 && n + 1 > bd.max_level))
    throw std::invalid_argument("dirichlet_terms: time level out of range");

  const FieldShape& shape = cs.shape();
  const int m1 = shape.m1;
  const int m2 = shape.m2;
  DensityField dir(shape);
  for (int v = 0; v < cs.blocks(); ++v) {
    const SchemeCoefficients& c = cs[v];
    const int l1 = v / shape.n2() - shape.mr1;
    const int l2 = v % shape.n2() - shape.mr2;
    const auto out = dir.block(v);
    if (bd.left) {
      for (int k2 = 0; k2 < m2; ++k2)
        out[static_cast<long>(k2) * m1] -=
            c.a1 * (bd.left(n, k2, l1, l2) + bd.left(n + 1, k2, l1, l2));
    }
    if (bd.right) {
      for (int k2 = 0; k2 < m2; ++k2)
        out[static_cast<long>(k2) * m1 + (m1 - 1)] -=
            c.b1 * (bd.right(n, k2, l1, l2) + bd.right(n + 1, k2, l1, l2));
    }
    if (bd.bottom) {
      for (int k1 = 0; k1 < m1; ++k1)
        out[k1] -= c.a2 * (bd.bottom(n, k1, l1, l2) + bd.bottom(n + 1, k1, l1, l2));
    }
    if (bd.top) {
      for (int k1 = 0; k1 < m1; ++k1)
        out[static_cast<long>(m2 - 1) * m1 + k1] -=
            c.b2 * (bd.top(n, k1, l1, l2) + bd.top(n + 1, k1, l1, l2));
    }
  }
  return dir;
}

DensityField assemble_rhs(const DensityField& u_n, const CoefficientSet& cs,
                          const DensityField& F_n, const DensityField& F_p,
                          const DensityField& dir, double tau,
                          const DensityField* source_sum, int threads) {
  if (!(F_n.shape() == u_n.shape()) || !(F_p.shape() == u_n.shape()) ||
      !(dir.shape() == u_n.shape()) ||
      (source_sum && !(source_sum->shape() == u_n.shape())))
    throw std::invalid_argument("assemble_rhs: field shapes differ");

  DensityField rhs(u_n.shape());
  apply_B_into(u_n, cs, rhs, threads);
  const auto out = rhs.data();
  const auto fn = F_n.data();
  const auto fp = F_p.data();
  const auto dr = dir.data();
  const double half_tau = 0.5 * tau;
  if (source_sum) {
    const auto src = source_sum->data();
    for (size_t i = 0; i < out.size(); ++i)
      out[i] += half_tau * (fn[i] + fp[i] + src[i]) + dr[i];
  } else {
    for (size_t i = 0; i < out.size(); ++i)
      out[i] += half_tau * (fn[i] + fp[i]) + dr[i];
  }
  return rhs;
}

}  // namespace kinturb
