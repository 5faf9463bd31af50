#include "kinturb/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kinturb {

double DensityField::norm_inf() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::fabs(x));
  return m;
}

bool DensityField::all_finite() const {
  for (double x : v_)
    if (!std::isfinite(x)) return false;
  return true;
}

void DensityField::fill(double value) { std::fill(v_.begin(), v_.end(), value); }

double max_abs_diff(const DensityField& a, const DensityField& b) {
  if (!(a.shape() == b.shape()))
    throw std::invalid_argument("max_abs_diff: field shapes differ");
  double m = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (size_t i = 0; i < da.size(); ++i) m = std::max(m, std::fabs(da[i] - db[i]));
  return m;
}

}  // namespace kinturb
