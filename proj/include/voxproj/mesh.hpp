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

#ifndef VOXPROJ_MESH_HPP
#define VOXPROJ_MESH_HPP

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "voxproj/grid.hpp"

namespace voxproj {

struct TriangleMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;
  /// Optional per-triangle part label (empty when unlabeled); selects the voxel channel.
  std::vector<int> labels;
  /// Triangles dropped at load time because two of their vertices coincide.
  std::size_t dropped_degenerate = 0;

  int label_count() const;
};

/**
 * Reads `v` and `f` records of an ASCII OBJ; polygons are fan-triangulated, negative (relative)
 * indices are resolved, and all other records are ignored. If `<path without .obj>.labels`
 * exists it must hold one non-negative integer per `f` record, inherited by that face's triangles.
 */
TriangleMesh load_obj(const std::filesystem::path& path);

struct VoxelizeOptions {
  int n = 32;
  double samples_per_area = 16.0;  ///< surface samples per squared voxel edge
  bool solid = true;
  std::uint64_t seed = 0;
};

/**
 * Bins seeded surface samples of the mesh into an n^3 grid after a uniform fit with 5% padding.
 * With `solid`, interior voxels are filled by parity of triangle crossings along z-columns, or by
 * flood-filling the exterior from the boundary when some column has an odd crossing count.
 * The result has one channel per label (one when unlabeled) and is strictly binary.
 */
VoxelGridf voxelize(const TriangleMesh& mesh, const VoxelizeOptions& options);

}  // namespace voxproj

#endif  // VOXPROJ_MESH_HPP
