#pragma once

#include <span>
#include <vector>

#include "kinturb/grid.hpp"

namespace kinturb {

/// Dimensions of a density field: interior space nodes times velocity nodes.
struct FieldShape {
  int m1 = 0;
  int m2 = 0;
  int mr1 = 0;
  int pr1 = 0;
  int mr2 = 0;
  int pr2 = 0;

  int n1() const { return mr1 + pr1 + 1; }
  int n2() const { return mr2 + pr2 + 1; }
  int blocks() const { return n1() * n2(); }
  long block_size() const { return static_cast<long>(m1) * m2; }
  long size() const { return block_size() * blocks(); }

  int vi(int l1, int l2) const { return (l1 + mr1) * n2() + (l2 + mr2); }
  long node(int k1, int k2) const { return static_cast<long>(k2) * m1 + k1; }

  bool operator==(const FieldShape&) const = default;

  static FieldShape of(const SpaceGrid& sg, const VelocityGrid& vg) {
    return {sg.M1, sg.M2, vg.MR1, vg.PR1, vg.MR2, vg.PR2};
  }
};

/// One time level of the grid function u[k1, k2, l1, l2].
///
/// Storage is a single flat array grouped by velocity node: the cell
/// (k1, k2, l1, l2) lives at vi(l1, l2) * m1 * m2 + k2 * m1 + k1. Each
/// velocity block is therefore contiguous, matching the block structure of
/// the time-step system.
class DensityField {
 public:
  DensityField() = default;
  explicit DensityField(FieldShape shape)
      : shape_(shape), v_(static_cast<size_t>(shape.size()), 0.0) {}
  DensityField(const SpaceGrid& sg, const VelocityGrid& vg)
      : DensityField(FieldShape::of(sg, vg)) {}

  const FieldShape& shape() const { return shape_; }

  double& at(int k1, int k2, int l1, int l2) {
    return v_[index(k1, k2, l1, l2)];
  }
  double at(int k1, int k2, int l1, int l2) const {
    return v_[index(k1, k2, l1, l2)];
  }

  std::span<double> block(int vi) {
    return {v_.data() + static_cast<long>(vi) * shape_.block_size(),
            static_cast<size_t>(shape_.block_size())};
  }
  std::span<const double> block(int vi) const {
    return {v_.data() + static_cast<long>(vi) * shape_.block_size(),
            static_cast<size_t>(shape_.block_size())};
  }

  std::span<double> data() { return {v_.data(), v_.size()}; }
  std::span<const double> data() const { return {v_.data(), v_.size()}; }

  double norm_inf() const;
  bool all_finite() const;
  void fill(double value);

 private:
  size_t index(int k1, int k2, int l1, int l2) const {
    return static_cast<size_t>(static_cast<long>(shape_.vi(l1, l2)) *
                                   shape_.block_size() +
                               shape_.node(k1, k2));
  }

  FieldShape shape_;
  std::vector<double> v_;
};

/// Max-norm of the difference of two fields with identical shape.
double max_abs_diff(const DensityField& a, const DensityField& b);

}  // namespace kinturb
