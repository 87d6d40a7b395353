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

#ifndef VOXPROJ_SAMPLING_HPP
#define VOXPROJ_SAMPLING_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "voxproj/grid.hpp"
#include "voxproj/view.hpp"

namespace voxproj {

/**
 * Linear map from one channel of an n^3 grid to the samples along the orthographic rays of a view.
 *
 * Rays are cast on an (s*n)^2 lattice in the rotated frame, with s = cfg.supersample, and sample
 * the n integer depths k = 0..n-1 along +z. Sample (rx, ry, k) sits at rotated-frame position
 * p = ((rx + 0.5)/s - 0.5, (ry + 0.5)/s - 0.5, k) and reads the source grid at
 * R^-1 (p - c0) + c0 with c0 = ((n-1)/2, (n-1)/2, (n-1)/2), by nearest or trilinear weights.
 * Taps outside the grid are dropped (zero occupancy).
 *
 * Sample layout is ((rx*N + ry)*n + k) with N = s*n, so for s = 1 the samples of a view are
 * exactly the rotated grid in VoxelGrid order and each ray is a contiguous run of n samples.
 */
class RaySampler {
 public:
  using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  RaySampler(int n, const Viewpoint& view, const ProjectionConfig& cfg);

  int n() const noexcept { return n_; }
  int supersample() const noexcept { return s_; }
  int rays_per_side() const noexcept { return s_ * n_; }
  Index ray_count() const noexcept { return Index(rays_per_side()) * rays_per_side(); }
  Index sample_count() const noexcept { return ray_count() * n_; }

  const Matrix& matrix() const noexcept { return matrix_; }

  /// Samples of one channel (length n^3) along every ray.
  Eigen::ArrayXd gather(const Eigen::Ref<const Eigen::ArrayXd>& channel) const {
    return (matrix_ * channel.matrix()).array();
  }

  /// Adjoint of gather.
  Eigen::ArrayXd scatter(const Eigen::Ref<const Eigen::ArrayXd>& samples) const {
    return (matrix_.transpose() * samples.matrix()).array();
  }

  /// Row-major pixel index (row*n + col) that ray `ray` contributes to; row = n-1-y, col = x.
  Index pixel_of_ray(Index ray) const noexcept {
    const Index N = rays_per_side();
    const Index col = (ray / N) / s_;
    const Index y = (ray % N) / s_;
    return (n_ - 1 - y) * n_ + col;
  }

 private:
  int n_;
  int s_;
  Matrix matrix_;
};

}  // namespace voxproj

#endif  // VOXPROJ_SAMPLING_HPP
