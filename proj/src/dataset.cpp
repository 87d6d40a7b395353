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

#include "voxproj/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <locale>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "voxproj/io.hpp"
#include "voxproj/parallel.hpp"
#include "voxproj/random.hpp"

namespace voxproj {
namespace {

std::string format_degrees(double v) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::setprecision(10) << v;
  return out.str();
}

std::string image_name(const std::string& id, std::size_t view, int channel, bool per_channel) {
  std::string name = id + "_v" + std::to_string(view);
  if (per_channel) name += "_c" + std::to_string(channel);
  return name + ".pgm";
}

}  // namespace

std::vector<Imaged> render_views(const VoxelGridd& grid, const ViewpointSet& views, RenderKind kind,
                                 const ProjectionConfig& cfg, int threads) {
  if (kind != RenderKind::kSemantic && grid.channels() != 1) {
    throw ShapeError(std::string(to_string(kind)) + " rendering expects a single-channel grid");
  }
  std::vector<std::optional<Imaged>> slots(views.size());
  parallel_for(views.size(), threads, [&](std::size_t i) {
    slots[i] = Projector(kind, grid.n(), views[i], cfg).forward(grid);
  });
  std::vector<Imaged> images;
  images.reserve(slots.size());
  for (auto& slot : slots) images.push_back(std::move(*slot));
  return images;
}

Imaged annotate_viewpoint(const Imaged& img, int view_index, int n_views) {
  if (img.channels() != 1) throw ShapeError("annotate_viewpoint: expects a single-channel image");
  if (n_views < 1 || view_index < 0 || view_index >= n_views) {
    throw std::out_of_range("annotate_viewpoint: view index outside [0, n_views)");
  }
  Imaged out(img.height(), img.width(), 1 + n_views);
  out.channel(0) = img.values();
  out.channel(1 + view_index).setOnes();
  return out;
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  for (const auto& e : manifest.entries) {
    out << e.shape_id << '\t' << e.view_index << '\t' << format_degrees(e.theta_deg) << '\t'
        << format_degrees(e.phi_deg) << '\t' << to_string(e.kind) << '\t' << e.relative_path << '\n';
  }
  out.close();
  if (!out) throw IoError("write failed: " + path.string());
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  DatasetManifest manifest;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t tab; (tab = text.find('\t', start)) != std::string::npos; start = tab + 1) {
      fields.push_back(text.substr(start, tab - start));
    }
    fields.push_back(text.substr(start));
    if (fields.size() != 6) throw ParseError(line, "manifest record needs 6 tab-separated fields");
    try {
      ManifestEntry e;
      e.shape_id = fields[0];
      e.view_index = std::stoi(fields[1]);
      e.theta_deg = std::stod(fields[2]);
      e.phi_deg = std::stod(fields[3]);
      e.kind = parse_render_kind(fields[4]);
      e.relative_path = fields[5];
      manifest.n_views = std::max(manifest.n_views, e.view_index + 1);
      manifest.entries.push_back(std::move(e));
    } catch (const std::logic_error& err) {
      throw ParseError(line, err.what());
    }
  }
  if (!manifest.entries.empty()) {
    const Imaged first = read_image_pgm(path.parent_path() / manifest.entries.front().relative_path);
    manifest.image_side = first.width();
    manifest.grid_side = first.width();
  }
  return manifest;
}

DatasetManifest render_dataset(const std::vector<std::pair<std::string, VoxelGridd>>& grids,
                               const std::filesystem::path& out_dir, const ViewpointSet& views, RenderKind kind,
                               const ProjectionConfig& cfg, int threads) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "images");
  DatasetManifest manifest;
  manifest.n_views = int(views.size());

  // Shapes render sequentially; views of one shape render concurrently.
  for (const auto& [id, grid] : grids) {
    manifest.grid_side = grid.n();
    manifest.image_side = grid.n();
    const auto images = render_views(grid, views, kind, cfg, threads);
    const bool per_channel = kind == RenderKind::kSemantic;
    for (std::size_t v = 0; v < images.size(); ++v) {
      for (int c = 0; c < images[v].channels(); ++c) {
        const std::string rel = "images/" + image_name(id, v, c, per_channel);
        write_image_pgm(images[v].plane(c), out_dir / rel);
        manifest.entries.push_back(
            {id, int(v), views[v].theta_degrees(), views[v].phi_degrees(), kind, rel});
      }
    }
  }
  write_manifest(manifest, out_dir / "manifest.tsv");
  return manifest;
}

std::uint64_t voxelize_seed(std::uint64_t seed, const std::string& shape_id) {
  return stream_seed(seed, "voxelize/" + shape_id);
}

std::vector<std::filesystem::path> list_meshes(const std::filesystem::path& input) {
  namespace fs = std::filesystem;
  if (!fs::exists(input)) throw IoError("no such file or directory: " + input.string());
  if (!fs::is_directory(input)) return {input};
  std::vector<fs::path> meshes;
  for (const auto& entry : fs::directory_iterator(input)) {
    if (entry.is_regular_file() && entry.path().extension() == ".obj") meshes.push_back(entry.path());
  }
  std::sort(meshes.begin(), meshes.end());
  return meshes;
}

DatasetManifest build_dataset(const std::filesystem::path& mesh_dir, const std::filesystem::path& out_dir,
                              const BuildOptions& options, std::ostream& log) {
  namespace fs = std::filesystem;
  const auto meshes = list_meshes(mesh_dir);
  if (meshes.empty()) throw std::runtime_error("no OBJ meshes in " + mesh_dir.string());
  fs::create_directories(out_dir / "grids");

  std::vector<std::optional<VoxelGridf>> voxelized(meshes.size());
  std::vector<std::string> errors(meshes.size());
  parallel_for(meshes.size(), options.threads, [&](std::size_t i) {
    try {
      VoxelizeOptions vox = options.voxelize;
      vox.seed = voxelize_seed(options.voxelize.seed, meshes[i].stem().string());
      voxelized[i] = voxelize(load_obj(meshes[i]), vox);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::vector<std::pair<std::string, VoxelGridd>> grids;
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    const std::string id = meshes[i].stem().string();
    if (!voxelized[i]) {
      log << "warning: skipping " << meshes[i].string() << ": " << errors[i] << '\n';
      continue;
    }
    write_grid(*voxelized[i], out_dir / "grids" / (id + ".voxg"));
    grids.emplace_back(id, voxelized[i]->cast<double>());
  }
  if (grids.empty()) throw std::runtime_error("every mesh in " + mesh_dir.string() + " failed");
  return render_dataset(grids, out_dir, options.views, options.kind, options.cfg, options.threads);
}

}  // namespace voxproj
