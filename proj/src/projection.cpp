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

#include "voxproj/projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "voxproj/random.hpp"

namespace voxproj {
namespace {

ProjectionConfig single_lattice(ProjectionConfig cfg) {
  cfg.supersample = 1;
  return cfg;
}

// Accessibility along one ray of n samples.
void ray_accessibility(const double* samples, int n, double tau, double* out) {
  double prefix = 0;
  for (int k = 0; k < n; ++k) {
    out[k] = std::exp(-tau * prefix);
    prefix += samples[k];
  }
}

}  // namespace

std::string_view to_string(RenderKind kind) {
  switch (kind) {
    case RenderKind::kSilhouette:
      return "silhouette";
    case RenderKind::kDepth:
      return "depth";
    case RenderKind::kSemantic:
      return "semantic";
  }
  return "unknown";
}

RenderKind parse_render_kind(std::string_view name) {
  if (name == "silhouette") return RenderKind::kSilhouette;
  if (name == "depth") return RenderKind::kDepth;
  if (name == "semantic") return RenderKind::kSemantic;
  throw std::invalid_argument("unknown render kind: " + std::string(name));
}

AccessibilityField accessibility(const VoxelGridd& rotated, double tau) {
  if (rotated.channels() != 1) throw ShapeError("accessibility: expects a single-channel grid");
  if (!(tau > 0)) throw std::invalid_argument("accessibility: tau must be > 0");
  const int n = rotated.n();
  AccessibilityField field{n, Eigen::ArrayXd(rotated.size())};
  for (Index ray = 0; ray < Index(n) * n; ++ray) {
    ray_accessibility(rotated.values().data() + ray * n, n, tau, field.values.data() + ray * n);
  }
  return field;
}

namespace detail {

VoxelGridd rotate(const VoxelGridd& grid, const Viewpoint& view, const ProjectionConfig& cfg) {
  const RaySampler sampler(grid.n(), view, single_lattice(cfg));
  VoxelGridd out(grid.n(), grid.channels());
  for (int c = 0; c < grid.channels(); ++c) out.channel(c) = sampler.gather(grid.channel(c));
  return out;
}

VoxelGridd rotate_vjp(const VoxelGridd& grid, const Viewpoint& view, const ProjectionConfig& cfg,
                      const VoxelGridd& upstream) {
  if (!grid.same_shape(upstream)) throw ShapeError("rotate_grid_vjp: upstream shape differs from grid");
  const RaySampler sampler(grid.n(), view, single_lattice(cfg));
  VoxelGridd out(grid.n(), grid.channels());
  for (int c = 0; c < grid.channels(); ++c) out.channel(c) = sampler.scatter(upstream.channel(c));
  return out;
}

}  // namespace detail

Projector::Projector(RenderKind kind, int n, const Viewpoint& view, const ProjectionConfig& cfg)
    : kind_(kind), tau_(cfg.tau), sampler_(n, view, cfg) {}

void Projector::check_grid(const VoxelGridd& grid) const {
  if (grid.n() != sampler_.n()) throw ShapeError("projection: grid side differs from projector");
  if (kind_ != RenderKind::kSemantic && grid.channels() != 1) {
    throw ShapeError(std::string(to_string(kind_)) + " projection expects a single-channel grid");
  }
}

Imaged Projector::output_like(int channels) const {
  const int n = sampler_.n();
  return Imaged(n, n, kind_ == RenderKind::kSemantic ? channels : 1);
}

Imaged Projector::forward(const VoxelGridd& grid) const {
  check_grid(grid);
  const int n = sampler_.n();
  const Index rays = sampler_.ray_count();
  const double box = 1.0 / (double(sampler_.supersample()) * sampler_.supersample());
  Imaged img = output_like(grid.channels());

  if (kind_ == RenderKind::kSilhouette) {
    const Eigen::ArrayXd samples = sampler_.gather(grid.channel(0));
    const Eigen::ArrayXd sums = samples.reshaped(n, rays).colwise().sum().transpose();
    for (Index r = 0; r < rays; ++r) img.values()[sampler_.pixel_of_ray(r)] += box * (1 - std::exp(-sums[r]));
    return img;
  }

  if (kind_ == RenderKind::kDepth) {
    const Eigen::ArrayXd samples = sampler_.gather(grid.channel(0));
    Eigen::ArrayXd access(n);
    for (Index r = 0; r < rays; ++r) {
      ray_accessibility(samples.data() + r * n, n, tau_, access.data());
      img.values()[sampler_.pixel_of_ray(r)] += box * (1 - std::exp(-access.sum()));
    }
    return img;
  }

  const int channels = grid.channels();
  Eigen::ArrayXd aggregate = Eigen::ArrayXd::Zero(grid.channel_size());
  for (int c = 0; c < channels; ++c) aggregate += grid.channel(c);
  const Eigen::ArrayXd aggregate_samples = sampler_.gather(aggregate.min(1.0));
  std::vector<Eigen::ArrayXd> part_samples;
  for (int c = 0; c < channels; ++c) part_samples.push_back(sampler_.gather(grid.channel(c)));

  Eigen::ArrayXd access(n);
  for (Index r = 0; r < rays; ++r) {
    ray_accessibility(aggregate_samples.data() + r * n, n, tau_, access.data());
    const Index pixel = sampler_.pixel_of_ray(r);
    for (int c = 0; c < channels; ++c) {
      const double visible = (part_samples[c].segment(r * n, n) * access).sum();
      img.values()[Index(c) * img.plane_size() + pixel] += box * (1 - std::exp(-visible));
    }
  }
  return img;
}

VoxelGridd Projector::backward(const VoxelGridd& grid, const Imaged& upstream) const {
  check_grid(grid);
  if (!upstream.same_shape(output_like(grid.channels()))) throw ShapeError("project_vjp: upstream shape mismatch");
  const int n = sampler_.n();
  const Index rays = sampler_.ray_count();
  const double box = 1.0 / (double(sampler_.supersample()) * sampler_.supersample());
  VoxelGridd grad(n, grid.channels());

  if (kind_ == RenderKind::kSilhouette) {
    const Eigen::ArrayXd samples = sampler_.gather(grid.channel(0));
    Eigen::ArrayXd d_samples(samples.size());
    for (Index r = 0; r < rays; ++r) {
      const double sum = samples.segment(r * n, n).sum();
      d_samples.segment(r * n, n).setConstant(box * upstream.values()[sampler_.pixel_of_ray(r)] * std::exp(-sum));
    }
    grad.channel(0) = sampler_.scatter(d_samples);
    return grad;
  }

  if (kind_ == RenderKind::kDepth) {
    const Eigen::ArrayXd samples = sampler_.gather(grid.channel(0));
    Eigen::ArrayXd d_samples(samples.size());
    Eigen::ArrayXd access(n);
    for (Index r = 0; r < rays; ++r) {
      ray_accessibility(samples.data() + r * n, n, tau_, access.data());
      const double d_depth = box * upstream.values()[sampler_.pixel_of_ray(r)] * std::exp(-access.sum());
      // dA(k)/dR(l) = -tau * A(k) for l < k
      double suffix = 0;
      for (int l = n - 1; l >= 0; --l) {
        d_samples[r * n + l] = -tau_ * d_depth * suffix;
        suffix += access[l];
      }
    }
    grad.channel(0) = sampler_.scatter(d_samples);
    return grad;
  }

  const int channels = grid.channels();
  Eigen::ArrayXd aggregate = Eigen::ArrayXd::Zero(grid.channel_size());
  for (int c = 0; c < channels; ++c) aggregate += grid.channel(c);
  const Eigen::ArrayXd aggregate_samples = sampler_.gather(aggregate.min(1.0));
  std::vector<Eigen::ArrayXd> part_samples;
  std::vector<Eigen::ArrayXd> d_part(channels, Eigen::ArrayXd(sampler_.sample_count()));
  for (int c = 0; c < channels; ++c) part_samples.push_back(sampler_.gather(grid.channel(c)));
  Eigen::ArrayXd d_aggregate(sampler_.sample_count());

  Eigen::ArrayXd access(n);
  Eigen::ArrayXd d_access(n);
  for (Index r = 0; r < rays; ++r) {
    ray_accessibility(aggregate_samples.data() + r * n, n, tau_, access.data());
    const Index pixel = sampler_.pixel_of_ray(r);
    d_access.setZero();
    for (int c = 0; c < channels; ++c) {
      const auto part = part_samples[c].segment(r * n, n);
      const double visible = (part * access).sum();
      const double d_visible = box * upstream.values()[Index(c) * upstream.plane_size() + pixel] * std::exp(-visible);
      d_part[c].segment(r * n, n) = d_visible * access;
      d_access += d_visible * part;
    }
    double suffix = 0;
    for (int l = n - 1; l >= 0; --l) {
      d_aggregate[r * n + l] = -tau_ * suffix;
      suffix += d_access[l] * access[l];
    }
  }

  // The clamp passes gradient only where the channel sum is below 1.
  const Eigen::ArrayXd d_source_aggregate = sampler_.scatter(d_aggregate) * (aggregate < 1.0).cast<double>();
  for (int c = 0; c < channels; ++c) grad.channel(c) = sampler_.scatter(d_part[c]) + d_source_aggregate;
  return grad;
}

double grad_check(RenderKind kind, const VoxelGridd& grid, const Viewpoint& view, const ProjectionConfig& cfg,
                  double eps, std::uint64_t seed, FiniteDifference scheme) {
  if (!(eps > 0)) throw std::invalid_argument("grad_check: eps must be > 0");
  const Projector projector(kind, grid.n(), view, cfg);
  Imaged upstream = projector.output_like(grid.channels());
  Rng rng(seed);
  for (double& u : upstream.values()) u = rng.uniform(0.5, 1.5);

  const VoxelGridd analytic = projector.backward(grid, upstream);
  VoxelGridd probe = grid;
  auto central = [&](Index i, double h) {
    const double original = probe.values()[i];
    probe.values()[i] = original + h;
    const double plus = (projector.forward(probe).values() * upstream.values()).sum();
    probe.values()[i] = original - h;
    const double minus = (projector.forward(probe).values() * upstream.values()).sum();
    probe.values()[i] = original;
    return (plus - minus) / (2 * h);
  };

  double worst = 0;
  for (Index i = 0; i < grid.size(); ++i) {
    const double numeric = scheme == FiniteDifference::kCentral ? central(i, eps)
                                                                : (4 * central(i, eps / 2) - central(i, eps)) / 3;
    const double a = analytic.values()[i];
    worst = std::max(worst, std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-12}));
  }
  return worst;
}

}  // namespace voxproj
