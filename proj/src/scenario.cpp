#include "kinturb/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kinturb/errors.hpp"

namespace kinturb {

namespace {

const char* side_name(Side s) {
  switch (s) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Bottom: return "bottom";
    case Side::Top: return "top";
  }
  return "?";
}

// Inward normal velocity component of node (l1, l2) for a side.
double inward_speed(Side side, const VelocityGrid& vg, int l1, int l2) {
  switch (side) {
    case Side::Left: return vg.alpha1(l1);
    case Side::Right: return -vg.alpha1(l1);
    case Side::Bottom: return vg.alpha2(l2);
    case Side::Top: return -vg.alpha2(l2);
  }
  return 0.0;
}

// Unit triangular profile over the interior indices of a side: zero at the
// first and last node, one at the middle. A single-node side keeps the peak.
double triangle(int j, int count) {
  if (count <= 1) return 1.0;
  const double span = count - 1;
  return 1.0 - std::fabs(2.0 * j / span - 1.0);
}

}  // namespace

std::vector<std::pair<int, int>> default_band(Side side, const VelocityGrid& vg) {
  int l1 = 0;
  int l2 = 0;
  switch (side) {
    case Side::Left: l1 = vg.PR1; break;
    case Side::Right: l1 = -vg.MR1; break;
    case Side::Bottom: l2 = vg.PR2; break;
    case Side::Top: l2 = -vg.MR2; break;
  }
  if (!(inward_speed(side, vg, l1, l2) > 0.0))
    throw ConfigError(std::string("collision: no inward velocity node available for "
                                  "the ") +
                      side_name(side) + " side");
  return {{l1, l2}};
}

BoundaryData collision_boundary(const CollisionParams& params, const SpaceGrid& sg,
                                const VelocityGrid& vg) {
  if (!(params.base_height >= 0.0) || !(params.ramp_rate >= 0.0))
    throw ConfigError("collision: profile heights must be nonnegative");

  std::array<std::vector<std::pair<int, int>>, 4> bands;
  for (int s = 0; s < 4; ++s) {
    const Side side = static_cast<Side>(s);
    if (!params.sides_enabled[static_cast<size_t>(s)]) continue;
    auto band = params.bands[static_cast<size_t>(s)];
    if (band.empty()) band = default_band(side, vg);
    for (auto [l1, l2] : band) {
      if (!vg.contains(l1, l2))
        throw ConfigError(std::string("collision: band node out of the velocity "
                                      "grid on the ") +
                          side_name(side) + " side");
      if (!(inward_speed(side, vg, l1, l2) > 0.0))
        throw ConfigError(std::string("collision: band on the ") + side_name(side) +
                          " side contains a velocity node that does not point "
                          "into the domain");
    }
    std::sort(band.begin(), band.end());
    bands[static_cast<size_t>(s)] = std::move(band);
  }

  const double base = params.base_height;
  const double ramp = params.ramp_rate;
  auto make_side = [base, ramp](std::vector<std::pair<int, int>> band, int count) {
    return [base, ramp, band = std::move(band), count](int n, int j, int l1,
                                                       int l2) -> double {
      if (!std::binary_search(band.begin(), band.end(), std::make_pair(l1, l2)))
        return 0.0;
      return (base + ramp * n) * triangle(j, count);
    };
  };

  BoundaryData bd;
  if (params.sides_enabled[0]) bd.left = make_side(bands[0], sg.M2);
  if (params.sides_enabled[1]) bd.right = make_side(bands[1], sg.M2);
  if (params.sides_enabled[2]) bd.bottom = make_side(bands[2], sg.M1);
  if (params.sides_enabled[3]) bd.top = make_side(bands[3], sg.M1);
  return bd;
}

DensityField empty_initial(const SpaceGrid& sg, const VelocityGrid& vg) {
  return DensityField(sg, vg);
}

DensityField uniform_initial(const SpaceGrid& sg, const VelocityGrid& vg, double c) {
  if (!std::isfinite(c))
    throw ConfigError("uniform initial state: value must be finite");
  DensityField u(sg, vg);
  u.fill(c);
  return u;
}

}  // namespace kinturb
