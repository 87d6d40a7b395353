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

#ifndef VOXPROJ_RECONSTRUCT_HPP
#define VOXPROJ_RECONSTRUCT_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "voxproj/grid.hpp"
#include "voxproj/projection.hpp"
#include "voxproj/view.hpp"

namespace voxproj {

struct ReconTarget {
  Imaged image;
  Viewpoint view;
  RenderKind kind;
};

/// Targets may mix silhouette and depth renders of the same views; all share the image side n.
struct ReconProblem {
  std::vector<ReconTarget> targets;
  int n = 0;
  ProjectionConfig cfg;

  /// Channel count of the unknown grid: that of the semantic targets, else 1.
  int channels() const;
  void validate() const;
};

struct ReconOptions {
  int iters = 400;
  double step = 0.05;  ///< logit change per iteration before halving
  int max_halvings = 10;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct ReconReport {
  VoxelGridd grid;
  /// (iteration, loss) with iteration 0 the initial grid; loss is the summed per-target MSE.
  std::vector<std::pair<int, double>> loss_curve;
  std::vector<double> residuals;  ///< per-target MSE of the final grid
  int halvings = 0;
};

/**
 * Fits occupancy = sigmoid(logits) to the targets, starting from logits uniform in
 * [-0.01, 0.01] (occupancy ~0.5) drawn from the "recon-init" sub-stream of `seed`.
 *
 * Each iteration moves every logit by `step` against the sign of its exact gradient. A step that
 * raises the loss is rejected and retried at half the step, at most max_halvings times per run.
 * Saturated rays have gradients near e^-16 at the start, so raw gradient steps would stall.
 */
ReconReport reconstruct(const ReconProblem& problem, const ReconOptions& options);

/// Summed per-target MSE and its gradient with respect to occupancy.
std::pair<double, VoxelGridd> reconstruction_loss(const ReconProblem& problem, const std::vector<Projector>& projectors,
                                                  const VoxelGridd& occupancy, int threads = 1);

/**
 * Carves every voxel that a sample on a ray through a zero silhouette pixel reads, in any view.
 * The default configuration (nearest, no supersampling) matches silhouettes rendered the same way,
 * which makes the hull contain every occupied voxel of the generating grid.
 */
VoxelGridd visual_hull(const std::vector<Imaged>& silhouettes, const std::vector<Viewpoint>& views, int n,
                       const ProjectionConfig& cfg = {1.0, Resampling::kNearest, 1});

/// iou(binarize(result, t), binarize(truth, t)).
double evaluate_recon(const VoxelGridd& result, const VoxelGridd& ground_truth, double threshold);

}  // namespace voxproj

#endif  // VOXPROJ_RECONSTRUCT_HPP
