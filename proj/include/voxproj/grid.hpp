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

#ifndef VOXPROJ_GRID_HPP
#define VOXPROJ_GRID_HPP

#include <Eigen/Core>
#include <array>
#include <cstdint>

#include "voxproj/errors.hpp"

namespace voxproj {

using Index = Eigen::Index;

/**
 * Dense C-channel cubic field of side n.
 *
 * Storage is channel-major then x, y, z: index(c, x, y, z) = ((c*n + x)*n + y)*n + z, so each
 * channel is a contiguous block of n^3 values and, within a channel, each z-column is contiguous.
 * Occupancy grids hold values in [0, 1]; the same container carries gradients with respect to
 * occupancy, which are unbounded. Use is_occupancy() to test the occupancy invariant.
 */
template <typename Scalar>
class VoxelGrid {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  explicit VoxelGrid(int n, int channels = 1) : VoxelGrid(n, channels, Values::Zero(volume(n, channels))) {}

  VoxelGrid(int n, int channels, Values values) : n_(n), channels_(channels), values_(std::move(values)) {
    if (n < 1 || channels < 1) throw ShapeError("VoxelGrid: n and channels must be >= 1");
    if (values_.size() != volume(n, channels)) throw ShapeError("VoxelGrid: value count != channels * n^3");
  }

  static VoxelGrid Constant(int n, int channels, Scalar value) {
    return VoxelGrid(n, channels, Values::Constant(volume(n, channels), value));
  }

  int n() const noexcept { return n_; }
  int channels() const noexcept { return channels_; }
  Index size() const noexcept { return values_.size(); }
  Index channel_size() const noexcept { return Index(n_) * n_ * n_; }

  Index index(int c, int x, int y, int z) const noexcept {
    return ((Index(c) * n_ + x) * n_ + y) * n_ + z;
  }

  /// Inverse of index(): returns {c, x, y, z}.
  std::array<int, 4> unravel(Index i) const noexcept {
    const int z = int(i % n_);
    i /= n_;
    const int y = int(i % n_);
    i /= n_;
    const int x = int(i % n_);
    return {int(i / n_), x, y, z};
  }

  bool contains(int x, int y, int z) const noexcept {
    return x >= 0 && y >= 0 && z >= 0 && x < n_ && y < n_ && z < n_;
  }

  Scalar operator()(int x, int y, int z) const { return values_[index(0, x, y, z)]; }
  Scalar& operator()(int x, int y, int z) { return values_[index(0, x, y, z)]; }
  Scalar operator()(int c, int x, int y, int z) const { return values_[index(c, x, y, z)]; }
  Scalar& operator()(int c, int x, int y, int z) { return values_[index(c, x, y, z)]; }

  const Values& values() const noexcept { return values_; }
  Values& values() noexcept { return values_; }

  auto channel(int c) const { return values_.segment(Index(c) * channel_size(), channel_size()); }
  auto channel(int c) { return values_.segment(Index(c) * channel_size(), channel_size()); }

  template <typename Other>
  VoxelGrid<Other> cast() const {
    return VoxelGrid<Other>(n_, channels_, values_.template cast<Other>());
  }

  bool same_shape(const VoxelGrid& other) const noexcept {
    return n_ == other.n_ && channels_ == other.channels_;
  }

  bool is_occupancy() const {
    return (values_ >= Scalar(0)).all() && (values_ <= Scalar(1)).all();
  }

  friend bool operator==(const VoxelGrid& a, const VoxelGrid& b) {
    return a.same_shape(b) && (a.values_ == b.values_).all();
  }

 private:
  static Index volume(int n, int channels) { return Index(channels) * n * n * n; }

  int n_;
  int channels_;
  Values values_;
};

/**
 * Dense h x w raster with C channels; layout index(c, row, col) = (c*h + row)*w + col.
 * A single-channel Image is a silhouette or depth rendering; a multi-channel one is a
 * semantic rendering or a viewpoint-annotated image.
 */
template <typename Scalar>
class Image {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Image(int h, int w, int channels = 1) : Image(h, w, channels, Values::Zero(Index(h) * w * channels)) {}

  Image(int h, int w, int channels, Values values) : h_(h), w_(w), channels_(channels), values_(std::move(values)) {
    if (h < 1 || w < 1 || channels < 1) throw ShapeError("Image: h, w and channels must be >= 1");
    if (values_.size() != Index(h) * w * channels) throw ShapeError("Image: value count != channels * h * w");
  }

  int height() const noexcept { return h_; }
  int width() const noexcept { return w_; }
  int channels() const noexcept { return channels_; }
  Index size() const noexcept { return values_.size(); }
  Index plane_size() const noexcept { return Index(h_) * w_; }

  Index index(int c, int row, int col) const noexcept { return (Index(c) * h_ + row) * w_ + col; }

  Scalar operator()(int row, int col) const { return values_[index(0, row, col)]; }
  Scalar& operator()(int row, int col) { return values_[index(0, row, col)]; }
  Scalar operator()(int c, int row, int col) const { return values_[index(c, row, col)]; }
  Scalar& operator()(int c, int row, int col) { return values_[index(c, row, col)]; }

  const Values& values() const noexcept { return values_; }
  Values& values() noexcept { return values_; }

  auto channel(int c) const { return values_.segment(Index(c) * plane_size(), plane_size()); }
  auto channel(int c) { return values_.segment(Index(c) * plane_size(), plane_size()); }

  /// Single-channel copy of channel c.
  Image plane(int c) const { return Image(h_, w_, 1, channel(c)); }

  template <typename Other>
  Image<Other> cast() const {
    return Image<Other>(h_, w_, channels_, values_.template cast<Other>());
  }

  bool same_shape(const Image& other) const noexcept {
    return h_ == other.h_ && w_ == other.w_ && channels_ == other.channels_;
  }

  friend bool operator==(const Image& a, const Image& b) {
    return a.same_shape(b) && (a.values_ == b.values_).all();
  }

 private:
  int h_;
  int w_;
  int channels_;
  Values values_;
};

using VoxelGridf = VoxelGrid<float>;
using VoxelGridd = VoxelGrid<double>;
using Imagef = Image<float>;
using Imaged = Image<double>;

}  // namespace voxproj

#endif  // VOXPROJ_GRID_HPP
