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

#include "voxproj/reconstruct.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "voxproj/metrics.hpp"
#include "voxproj/parallel.hpp"
#include "voxproj/random.hpp"

namespace voxproj {

int ReconProblem::channels() const {
  for (const auto& t : targets) {
    if (t.kind == RenderKind::kSemantic) return t.image.channels();
  }
  return 1;
}

void ReconProblem::validate() const {
  if (targets.empty()) throw std::invalid_argument("ReconProblem: no targets");
  if (n < 1) throw std::invalid_argument("ReconProblem: n must be >= 1");
  cfg.validate();
  const int c = channels();
  for (const auto& t : targets) {
    if (t.image.height() != n || t.image.width() != n) throw ShapeError("ReconProblem: target side differs from n");
    const int expected = t.kind == RenderKind::kSemantic ? c : 1;
    if (t.image.channels() != expected) throw ShapeError("ReconProblem: target channel count mismatch");
    if (c > 1 && t.kind != RenderKind::kSemantic) {
      throw std::invalid_argument("ReconProblem: semantic targets cannot be mixed with single-channel kinds");
    }
  }
}

std::pair<double, VoxelGridd> reconstruction_loss(const ReconProblem& problem, const std::vector<Projector>& projectors,
                                                  const VoxelGridd& occupancy, int threads) {
  const std::size_t count = problem.targets.size();
  std::vector<double> losses(count);
  std::vector<std::optional<VoxelGridd>> grads(count);
  parallel_for(count, threads, [&](std::size_t i) {
    const Imaged& target = problem.targets[i].image;
    const Imaged rendered = projectors[i].forward(occupancy);
    const Eigen::ArrayXd residual = rendered.values() - target.values();
    const double pixels = double(residual.size());
    losses[i] = residual.square().sum() / pixels;
    const Imaged upstream(target.height(), target.width(), target.channels(), (2.0 / pixels) * residual);
    grads[i] = projectors[i].backward(occupancy, upstream);
  });

  double loss = 0;
  VoxelGridd grad(occupancy.n(), occupancy.channels());
  for (std::size_t i = 0; i < count; ++i) {
    loss += losses[i];
    grad.values() += grads[i]->values();
  }
  return {loss, std::move(grad)};
}

ReconReport reconstruct(const ReconProblem& problem, const ReconOptions& options) {
  problem.validate();
  if (options.iters < 0) throw std::invalid_argument("reconstruct: iters must be >= 0");
  if (!(options.step > 0)) throw std::invalid_argument("reconstruct: step must be > 0");

  std::vector<Projector> projectors;
  for (const auto& t : problem.targets) projectors.emplace_back(t.kind, problem.n, t.view, problem.cfg);

  VoxelGridd logits(problem.n, problem.channels());
  Rng rng(stream_seed(options.seed, "recon-init"));
  for (double& v : logits.values()) v = rng.uniform(-0.01, 0.01);

  auto occupancy_of = [](const VoxelGridd& l) {
    return VoxelGridd(l.n(), l.channels(), 1.0 / (1.0 + (-l.values()).exp()));
  };
  auto evaluate = [&](const VoxelGridd& l) {
    const VoxelGridd occ = occupancy_of(l);
    auto [loss, grad] = reconstruction_loss(problem, projectors, occ, options.threads);
    grad.values() *= occ.values() * (1.0 - occ.values());
    return std::pair{loss, std::move(grad)};
  };

  ReconReport report{occupancy_of(logits), {}, {}, 0};
  auto [loss, grad] = evaluate(logits);
  report.loss_curve.emplace_back(0, loss);

  double step = options.step;
  for (int it = 1; it <= options.iters; ++it) {
    while (true) {
      VoxelGridd candidate(logits.n(), logits.channels(), logits.values() - step * grad.values().sign());
      auto [next_loss, next_grad] = evaluate(candidate);
      if (next_loss > loss && report.halvings < options.max_halvings) {
        step *= 0.5;
        ++report.halvings;
        continue;
      }
      logits = std::move(candidate);
      loss = next_loss;
      grad = std::move(next_grad);
      break;
    }
    report.loss_curve.emplace_back(it, loss);
  }

  report.grid = occupancy_of(logits);
  for (std::size_t i = 0; i < problem.targets.size(); ++i) {
    const Eigen::ArrayXd residual = projectors[i].forward(report.grid).values() - problem.targets[i].image.values();
    report.residuals.push_back(residual.square().mean());
  }
  return report;
}

VoxelGridd visual_hull(const std::vector<Imaged>& silhouettes, const std::vector<Viewpoint>& views, int n,
                       const ProjectionConfig& cfg) {
  if (silhouettes.size() != views.size()) throw std::invalid_argument("visual_hull: silhouette and view counts differ");
  VoxelGridd hull = VoxelGridd::Constant(n, 1, 1.0);
  for (std::size_t v = 0; v < views.size(); ++v) {
    const Imaged& sil = silhouettes[v];
    if (sil.channels() != 1 || sil.height() != n || sil.width() != n) {
      throw ShapeError("visual_hull: silhouettes must be single-channel n x n");
    }
    if (((sil.values() != 0.0) && (sil.values() != 1.0)).any()) {
      throw std::invalid_argument("visual_hull: silhouettes must be binary");
    }
    const RaySampler sampler(n, views[v], cfg);
    Eigen::ArrayXd empty_ray(sampler.sample_count());
    for (Index r = 0; r < sampler.ray_count(); ++r) {
      empty_ray.segment(r * n, n).setConstant(sil.values()[sampler.pixel_of_ray(r)] == 0.0 ? 1.0 : 0.0);
    }
    hull.values() *= (sampler.scatter(empty_ray) == 0.0).cast<double>();
  }
  return hull;
}

double evaluate_recon(const VoxelGridd& result, const VoxelGridd& ground_truth, double threshold) {
  if (!result.same_shape(ground_truth)) throw ShapeError("evaluate_recon: grids differ in shape");
  return iou(binarize(result, threshold), binarize(ground_truth, threshold));
}

}  // namespace voxproj
