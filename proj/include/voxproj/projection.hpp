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

#ifndef VOXPROJ_PROJECTION_HPP
#define VOXPROJ_PROJECTION_HPP

#include <cstdint>
#include <string_view>

#include "voxproj/grid.hpp"
#include "voxproj/sampling.hpp"
#include "voxproj/view.hpp"

namespace voxproj {

enum class RenderKind { kSilhouette, kDepth, kSemantic };

std::string_view to_string(RenderKind kind);
RenderKind parse_render_kind(std::string_view name);

/// A(x, y, k) = exp(-tau * sum_{l<k} V(x, y, l)) over a rotated single-channel grid; same layout.
struct AccessibilityField {
  int n;
  Eigen::ArrayXd values;

  double operator()(int x, int y, int k) const { return values[(Index(x) * n + y) * n + k]; }
};

AccessibilityField accessibility(const VoxelGridd& rotated, double tau);

/**
 * One differentiable renderer bound to a grid side, view and configuration.
 *
 *   silhouette: 1 - exp(-sum_k R(k))
 *   depth:      1 - exp(-sum_k A(k)),            A(k) = exp(-tau * sum_{l<k} R(l))
 *   semantic:   1 - exp(-sum_k R_c(k) * A_G(k))  per channel c, with A_G the accessibility of
 *               the rotated aggregate G = min(1, sum_c V_c)
 *
 * where R is the view's resampling of the grid along each ray. With supersampling, per-ray values
 * are box-averaged into n x n pixels. backward() returns the gradient of <forward(grid), upstream>
 * with respect to every voxel.
 */
class Projector {
 public:
  Projector(RenderKind kind, int n, const Viewpoint& view, const ProjectionConfig& cfg);

  RenderKind kind() const noexcept { return kind_; }
  const RaySampler& sampler() const noexcept { return sampler_; }

  Imaged forward(const VoxelGridd& grid) const;
  VoxelGridd backward(const VoxelGridd& grid, const Imaged& upstream) const;

  /// Shape of forward() for a grid with the given channel count.
  Imaged output_like(int channels) const;

 private:
  void check_grid(const VoxelGridd& grid) const;

  RenderKind kind_;
  double tau_;
  RaySampler sampler_;
};

namespace detail {
VoxelGridd rotate(const VoxelGridd& grid, const Viewpoint& view, const ProjectionConfig& cfg);
VoxelGridd rotate_vjp(const VoxelGridd& grid, const Viewpoint& view, const ProjectionConfig& cfg,
                      const VoxelGridd& upstream);
}  // namespace detail

/// The grid resampled as seen from `view`, on the same lattice (supersampling does not apply).
template <typename Scalar>
VoxelGrid<Scalar> rotate_grid(const VoxelGrid<Scalar>& grid, const Viewpoint& view, const ProjectionConfig& cfg) {
  return detail::rotate(grid.template cast<double>(), view, cfg).template cast<Scalar>();
}

/// Transpose of rotate_grid's resampling applied to `upstream`.
template <typename Scalar>
VoxelGrid<Scalar> rotate_grid_vjp(const VoxelGrid<Scalar>& grid, const Viewpoint& view, const ProjectionConfig& cfg,
                                  const VoxelGrid<Scalar>& upstream) {
  return detail::rotate_vjp(grid.template cast<double>(), view, cfg, upstream.template cast<double>())
      .template cast<Scalar>();
}

template <typename Scalar>
Image<Scalar> project(RenderKind kind, const VoxelGrid<Scalar>& grid, const Viewpoint& view,
                      const ProjectionConfig& cfg) {
  return Projector(kind, grid.n(), view, cfg).forward(grid.template cast<double>()).template cast<Scalar>();
}

template <typename Scalar>
Image<Scalar> project_silhouette(const VoxelGrid<Scalar>& grid, const Viewpoint& view, const ProjectionConfig& cfg) {
  return project(RenderKind::kSilhouette, grid, view, cfg);
}

template <typename Scalar>
Image<Scalar> project_depth(const VoxelGrid<Scalar>& grid, const Viewpoint& view, const ProjectionConfig& cfg) {
  return project(RenderKind::kDepth, grid, view, cfg);
}

template <typename Scalar>
Image<Scalar> project_semantic(const VoxelGrid<Scalar>& grid, const Viewpoint& view, const ProjectionConfig& cfg) {
  return project(RenderKind::kSemantic, grid, view, cfg);
}

template <typename Scalar>
VoxelGrid<Scalar> project_vjp(RenderKind kind, const VoxelGrid<Scalar>& grid, const Viewpoint& view,
                              const ProjectionConfig& cfg, const Image<Scalar>& upstream) {
  return Projector(kind, grid.n(), view, cfg)
      .backward(grid.template cast<double>(), upstream.template cast<double>())
      .template cast<Scalar>();
}

enum class FiniteDifference {
  kCentral,     ///< (f(v + eps) - f(v - eps)) / 2 eps
  kRichardson,  ///< (4 D(eps / 2) - D(eps)) / 3 with D the central difference
};

/**
 * Worst relative error between project_vjp and finite differences of <project(grid), u> over
 * every voxel, for a fixed upstream u drawn uniformly from [0.5, 1.5] with `seed`.
 * Relative error is |a - b| / max(|a|, |b|, 1e-12).
 */
double grad_check(RenderKind kind, const VoxelGridd& grid, const Viewpoint& view, const ProjectionConfig& cfg,
                  double eps, std::uint64_t seed = 0, FiniteDifference scheme = FiniteDifference::kCentral);

}  // namespace voxproj

#endif  // VOXPROJ_PROJECTION_HPP
