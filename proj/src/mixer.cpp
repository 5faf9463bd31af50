#include "kinturb/mixer.hpp"

#include <cmath>
#include <stdexcept>

#include "kinturb/parallel.hpp"

namespace kinturb {

namespace {

// Beta-sum for one alpha node over a gathered slice. norms and weights are
// indexed by vi in the same order as the slice.
double beta_sum(std::span<const double> slice, std::span<const double> norms,
                std::span<const double> weights, int a) {
  const double rho_a = slice[a];
  const double norm_a = norms[a];
  double s = 0.0;
  for (size_t b = 0; b < slice.size(); ++b) {
    const double d = norms[b] * slice[b] - norm_a * rho_a;
    const double r = -d / (1.0 + std::fabs(d));
    s += weights[b] * (d >= 0.0 ? r * rho_a : r * slice[b]);
  }
  return s;
}

std::vector<double> node_norms(const VelocityGrid& vg) {
  std::vector<double> norms(static_cast<size_t>(vg.count()));
  for (int v = 0; v < vg.count(); ++v)
    norms[static_cast<size_t>(v)] = vg.norm(vg.l1_of(v), vg.l2_of(v));
  return norms;
}

}  // namespace

MixerField mixer_integral(std::span<const double> slice, const VelocityGrid& vg,
                          const QuadratureWeights& w, double kappa) {
  const size_t q1 = static_cast<size_t>(vg.count());
  if (slice.size() != q1)
    throw std::invalid_argument("mixer_integral: slice size does not match the "
                                "velocity grid");
  const auto norms = node_norms(vg);
  MixerField out;
  out.kappa = kappa;
  out.values.resize(q1);
  for (size_t a = 0; a < q1; ++a)
    out.values[a] = kappa * beta_sum(slice, norms, w.values(), static_cast<int>(a));
  return out;
}

void mixer_apply(const DensityField& u, const VelocityGrid& vg,
                 const QuadratureWeights& w, double kappa, int threads,
                 DensityField& out) {
  if (!(u.shape() == out.shape()))
    throw std::invalid_argument("mixer_apply: field shapes differ");
  const FieldShape& shape = u.shape();
  if (shape.blocks() != vg.count())
    throw std::invalid_argument("mixer_apply: velocity grid does not match field");

  const auto norms = node_norms(vg);
  const long bs = shape.block_size();
  const int blocks = shape.blocks();
  const auto uin = u.data();
  const auto uout = out.data();
  const auto& weights = w.values();

  parallel_for(bs, threads, [&](long lo, long hi) {
    std::vector<double> slice(static_cast<size_t>(blocks));
    for (long node = lo; node < hi; ++node) {
      for (int b = 0; b < blocks; ++b)
        slice[static_cast<size_t>(b)] = uin[static_cast<size_t>(b) * bs + node];
      for (int a = 0; a < blocks; ++a)
        uout[static_cast<size_t>(a) * bs + node] =
            kappa * beta_sum(slice, norms, weights, a);
    }
  });
}

}  // namespace kinturb
