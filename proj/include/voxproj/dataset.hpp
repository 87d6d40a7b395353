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

#ifndef VOXPROJ_DATASET_HPP
#define VOXPROJ_DATASET_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "voxproj/grid.hpp"
#include "voxproj/mesh.hpp"
#include "voxproj/projection.hpp"
#include "voxproj/view.hpp"

namespace voxproj {

/// One image per view, in view order.
std::vector<Imaged> render_views(const VoxelGridd& grid, const ViewpointSet& views, RenderKind kind,
                                 const ProjectionConfig& cfg, int threads = 1);

/// Channel 0 is the image; channel 1 + j is all ones for j == view_index and zero otherwise.
Imaged annotate_viewpoint(const Imaged& img, int view_index, int n_views);

struct ManifestEntry {
  std::string shape_id;
  int view_index = 0;
  double theta_deg = 0;
  double phi_deg = 0;
  RenderKind kind = RenderKind::kSilhouette;
  std::string relative_path;  ///< relative to the manifest's directory

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// Rows are `shape_id \t view_index \t theta_deg \t phi_deg \t kind \t relative_path`.
/// Semantic renders contribute one row per channel image (`..._c<k>.pgm`).
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  int grid_side = 0;
  int image_side = 0;
  int n_views = 0;
};

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

/// Renders every (id, grid) into `out_dir/images/` and writes `out_dir/manifest.tsv`.
DatasetManifest render_dataset(const std::vector<std::pair<std::string, VoxelGridd>>& grids,
                               const std::filesystem::path& out_dir, const ViewpointSet& views, RenderKind kind,
                               const ProjectionConfig& cfg, int threads = 1);

struct BuildOptions {
  VoxelizeOptions voxelize;  ///< seed here is the global seed; each mesh uses its own named sub-stream
  ViewpointSet views;
  RenderKind kind = RenderKind::kSilhouette;
  ProjectionConfig cfg;
  int threads = 1;
};

/// Seed of the voxelization sub-stream for one shape.
std::uint64_t voxelize_seed(std::uint64_t seed, const std::string& shape_id);

/// Sorted `*.obj` files of a directory, or the file itself.
std::vector<std::filesystem::path> list_meshes(const std::filesystem::path& input);

/**
 * Voxelizes every OBJ under `mesh_dir` (VOXG files in `out_dir/grids/`) and renders them as in
 * render_dataset. Meshes that fail are reported on `log` and skipped; throws if all fail.
 */
DatasetManifest build_dataset(const std::filesystem::path& mesh_dir, const std::filesystem::path& out_dir,
                              const BuildOptions& options, std::ostream& log);

}  // namespace voxproj

#endif  // VOXPROJ_DATASET_HPP
