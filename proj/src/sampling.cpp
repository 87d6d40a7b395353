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

#include "voxproj/sampling.hpp"

#include <array>
#include <cmath>

namespace voxproj {
namespace {

// Rotation matrices carry ~1e-16 noise at multiples of 90 degrees; snapping keeps those views
// exact lattice permutations and avoids spurious near-zero trilinear taps.
double snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) < 1e-9 ? r : v;
}

}  // namespace

RaySampler::RaySampler(int n, const Viewpoint& view, const ProjectionConfig& cfg) : n_(n), s_(cfg.supersample) {
  cfg.validate();
  if (n < 1) throw ShapeError("RaySampler: n must be >= 1");

  const Eigen::Matrix3d inverse = view.rotation().transpose();
  const double c0 = 0.5 * (n - 1);
  const int N = rays_per_side();
  const Index n3 = Index(n) * n * n;
  const bool nearest = cfg.resampling == Resampling::kNearest;

  matrix_.resize(sample_count(), n3);
  matrix_.reserve(sample_count() * (nearest ? 1 : 8));

  auto in_range = [n](int v) { return v >= 0 && v < n; };
  Index row = 0;
  for (int rx = 0; rx < N; ++rx) {
    for (int ry = 0; ry < N; ++ry) {
      const double px = (rx + 0.5) / s_ - 0.5;
      const double py = (ry + 0.5) / s_ - 0.5;
      for (int k = 0; k < n; ++k, ++row) {
        matrix_.startVec(row);
        const Eigen::Vector3d src = inverse * Eigen::Vector3d(px - c0, py - c0, k - c0) + Eigen::Vector3d::Constant(c0);
        const std::array<double, 3> p{snap(src.x()), snap(src.y()), snap(src.z())};

        if (nearest) {
          const int x = int(std::floor(p[0] + 0.5));
          const int y = int(std::floor(p[1] + 0.5));
          const int z = int(std::floor(p[2] + 0.5));
          if (in_range(x) && in_range(y) && in_range(z)) matrix_.insertBack(row, (Index(x) * n + y) * n + z) = 1.0;
          continue;
        }

        std::array<int, 3> lo;
        std::array<double, 3> frac;
        for (int a = 0; a < 3; ++a) {
          lo[a] = int(std::floor(p[a]));
          frac[a] = p[a] - lo[a];
        }
        // Corners in ascending column order (x outermost) as insertBack requires.
        for (int dx = 0; dx < 2; ++dx) {
          const double wx = dx ? frac[0] : 1 - frac[0];
          const int x = lo[0] + dx;
          if (wx == 0 || !in_range(x)) continue;
          for (int dy = 0; dy < 2; ++dy) {
            const double wy = dy ? frac[1] : 1 - frac[1];
            const int y = lo[1] + dy;
            if (wy == 0 || !in_range(y)) continue;
            for (int dz = 0; dz < 2; ++dz) {
              const double wz = dz ? frac[2] : 1 - frac[2];
              const int z = lo[2] + dz;
              if (wz == 0 || !in_range(z)) continue;
              matrix_.insertBack(row, (Index(x) * n + y) * n + z) = wx * wy * wz;
            }
          }
        }
      }
    }
  }
  matrix_.finalize();
}

}  // namespace voxproj
