// Copyright 2026 The voxproj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VOXPROJ_METRICS_HPP
#define VOXPROJ_METRICS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "voxproj/grid.hpp"

namespace voxproj {

using BinaryArray = Eigen::Array<std::uint8_t, Eigen::Dynamic, 1>;

/// A set of equally-shaped binary items (flattened grids or images).
class ShapeSet {
 public:
  ShapeSet() = default;
  /// `side` is the cubic side for grid sets (required by the IoU metrics), 0 otherwise.
  explicit ShapeSet(std::vector<BinaryArray> items, int side = 0);

  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  Index dimension() const noexcept { return items_.empty() ? 0 : items_.front().size(); }
  int side() const noexcept { return side_; }
  const BinaryArray& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<BinaryArray>& items() const noexcept { return items_; }

  void push_back(BinaryArray item);

 private:
  std::vector<BinaryArray> items_;
  int side_ = 0;
};

/// 1 where value > threshold, else 0.
template <typename Derived>
BinaryArray binarize(const Eigen::ArrayBase<Derived>& values, double threshold) {
  return (values.template cast<double>() > threshold).template cast<std::uint8_t>();
}

template <typename Scalar>
BinaryArray binarize(const VoxelGrid<Scalar>& grid, double threshold) {
  return binarize(grid.values(), threshold);
}

/// Fraction of differing elements.
double hamming_mean(const BinaryArray& a, const BinaryArray& b);

/// Biased squared-MMD with kernel exp(-hamming_mean(x, y) / bandwidth), clamped at 0.
double mmd(const ShapeSet& a, const ShapeSet& b, double bandwidth, int threads = 1);

/// |a and b| / |a or b|, and 1 for two empty arrays.
double iou(const BinaryArray& a, const BinaryArray& b);

struct Alignment {
  int view_index;
  double iou;
};

/// The 8 azimuthal rotations (view order, nearest resampling, re-binarized at 0.5) of a cubic grid.
std::vector<BinaryArray> azimuth_rotations(const BinaryArray& grid, int side);

/// Azimuth (0..7) of g that maximizes IoU with x; ties go to the lowest index.
Alignment align_best_rotation(const BinaryArray& g, const BinaryArray& x, int side);

struct ChamferIou {
  double coverage;  ///< dataset -> generated
  double accuracy;  ///< generated -> dataset
  double average;
};

ChamferIou chamfer_iou(const ShapeSet& generated, const ShapeSet& dataset, int threads = 1);

}  // namespace voxproj

#endif  // VOXPROJ_METRICS_HPP
