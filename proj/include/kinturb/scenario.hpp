#pragma once

#include <array>
#include <utility>
#include <vector>

#include "kinturb/field.hpp"
#include "kinturb/grid.hpp"
#include "kinturb/scheme.hpp"

namespace kinturb {

enum class Side { Left = 0, Right = 1, Bottom = 2, Top = 3 };

/// Parameters of the four-stream inflow experiment: each enabled side of
/// the rectangle carries Dirichlet data with a triangular profile along the
/// side and a height growing linearly in the time level, restricted to a
/// band of inward-pointing velocity nodes.
struct CollisionParams {
  double base_height = 0.0;
  double ramp_rate = 0.05;
  std::array<bool, 4> sides_enabled{true, true, true, true};
  /// Velocity nodes (l1, l2) carrying the inflow per side; an empty band
  /// selects the default: the single node with the largest inward normal
  /// speed and zero tangential component.
  std::array<std::vector<std::pair<int, int>>, 4> bands;
};

/// Default inflow band for a side (largest inward normal speed, zero
/// tangential component). Throws when the side has no inward node.
std::vector<std::pair<int, int>> default_band(Side side, const VelocityGrid& vg);

/// Boundary data of the collision experiment:
/// DIR(n, j, l) = H(n) * triangle(j) * [l in band], H(n) = base + ramp * n.
/// The triangular profile vanishes at the first and last interior node of
/// the side and peaks at its middle.
BoundaryData collision_boundary(const CollisionParams& params, const SpaceGrid& sg,
                                const VelocityGrid& vg);

/// The all-zero initial state.
DensityField empty_initial(const SpaceGrid& sg, const VelocityGrid& vg);

/// Constant initial state u = c.
DensityField uniform_initial(const SpaceGrid& sg, const VelocityGrid& vg, double c);

}  // namespace kinturb
