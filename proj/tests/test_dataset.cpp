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

#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "support/shapes.hpp"
#include "voxproj/dataset.hpp"
#include "voxproj/errors.hpp"
#include "voxproj/io.hpp"
#include "voxproj/metrics.hpp"

using namespace voxproj;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::set<std::string> files_under(const fs::path& dir) {
  std::set<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out.insert(fs::relative(e.path(), dir).generic_string());
  }
  return out;
}

}  // namespace

TEST_CASE("render_views") {
  const ProjectionConfig cfg;
  SUBCASE("empty grid renders empty silhouettes") {
    const auto images = render_views(VoxelGridd(8), ViewpointSet(), RenderKind::kSilhouette, cfg);
    REQUIRE(images.size() == 8);
    for (const auto& img : images) CHECK((img.values() == 0).all());
    for (const auto& img : render_views(VoxelGridd(8, 2), ViewpointSet(), RenderKind::kSemantic, cfg)) {
      CHECK(img.channels() == 2);
      CHECK((img.values() == 0).all());
    }
  }
  SUBCASE("one image per view in view order, independent of threads") {
    const VoxelGridd g = testing::random_grid(6, 1, 2);
    const ViewpointSet views;
    const auto serial = render_views(g, views, RenderKind::kDepth, cfg, 1);
    const auto threaded = render_views(g, views, RenderKind::kDepth, cfg, 4);
    for (std::size_t v = 0; v < views.size(); ++v) {
      CHECK(serial[v] == project_depth(g, views[v], cfg));
      CHECK(threaded[v] == serial[v]);
    }
  }
  SUBCASE("a centered sphere looks the same from every azimuth") {
    const auto images = render_views(testing::solid_sphere(32, 10), ViewpointSet(), RenderKind::kSilhouette, cfg);
    for (int v = 1; v < 8; ++v) {
      CAPTURE(v);
      const int reference = v % 2;
      if (v != reference) CHECK((images[v].values() - images[reference].values()).abs().maxCoeff() <= 1e-6);
      CHECK((binarize(images[v].values(), 0.5) == binarize(images[0].values(), 0.5)).all());
      CHECK((images[v].values() - images[0].values()).abs().mean() < 0.02);
    }
  }
  SUBCASE("kind and channel count must agree") {
    CHECK_THROWS_AS(render_views(VoxelGridd(4, 2), ViewpointSet(), RenderKind::kSilhouette, cfg), ShapeError);
    CHECK_THROWS_AS(render_views(VoxelGridd(4, 2), ViewpointSet(), RenderKind::kDepth, cfg), ShapeError);
    CHECK_NOTHROW(render_views(VoxelGridd(4, 1), ViewpointSet(), RenderKind::kSemantic, cfg));
  }
}

TEST_CASE("annotate_viewpoint") {
  const Imaged img = project_silhouette(testing::random_grid(5, 1, 1), Viewpoint(), ProjectionConfig{});
  const Imaged out = annotate_viewpoint(img, 0, 8);
  REQUIRE(out.channels() == 9);
  CHECK((out.plane(0).values() == img.values()).all());
  CHECK((out.channel(1) == 1.0).all());
  for (int c = 2; c < 9; ++c) CHECK((out.channel(c) == 0.0).all());
  CHECK((annotate_viewpoint(img, 5, 8).channel(6) == 1.0).all());
  CHECK_THROWS_AS(annotate_viewpoint(img, 8, 8), std::out_of_range);
  CHECK_THROWS_AS(annotate_viewpoint(img, -1, 8), std::out_of_range);
}

TEST_CASE("manifest round trip") {
  const fs::path dir = testing::temp_dir("manifest");
  write_image_pgm(Imaged(6, 6), dir / "a.pgm");
  DatasetManifest m;
  m.entries.push_back({"chair_01", 0, 0.0, 0.0, RenderKind::kSilhouette, "a.pgm"});
  m.entries.push_back({"chair_01", 1, -12.5, 45.0, RenderKind::kDepth, "a.pgm"});
  m.entries.push_back({"chair_01", 7, 0.0, 315.0, RenderKind::kSemantic, "a.pgm"});
  write_manifest(m, dir / "manifest.tsv");
  CHECK(slurp(dir / "manifest.tsv").substr(0, 32) == "chair_01\t0\t0\t0\tsilhouette\ta.pgm\n");
  const DatasetManifest back = read_manifest(dir / "manifest.tsv");
  CHECK(back.entries == m.entries);
  CHECK(back.n_views == 8);
  CHECK(back.image_side == 6);

  std::ofstream(dir / "bad.tsv") << "chair_01\t0\t0\t0\tsilhouette\ta.pgm\nchair_01\t1\t0\n";
  try {
    read_manifest(dir / "bad.tsv");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::ofstream(dir / "kind.tsv") << "chair_01\t0\t0\t0\tnormals\ta.pgm\n";
  CHECK_THROWS_AS(read_manifest(dir / "kind.tsv"), ParseError);
  CHECK_THROWS_AS(read_manifest(dir / "missing.tsv"), IoError);
}

TEST_CASE("build_dataset") {
  const fs::path meshes = testing::temp_dir("build_meshes");
  testing::write_cube_obj(meshes / "cube.obj");
  testing::write_sphere_obj(meshes / "sphere.obj", 12, 24);
  std::ofstream(meshes / "notes.txt") << "not a mesh\n";
  BuildOptions opts;
  opts.voxelize.n = 16;
  opts.voxelize.seed = 5;

  SUBCASE("two meshes and eight views give sixteen entries with matching files") {
    const fs::path out = testing::temp_dir("build_out");
    std::ostringstream log;
    const DatasetManifest m = build_dataset(meshes, out, opts, log);
    CHECK(m.entries.size() == 16);
    CHECK(m.grid_side == 16);
    CHECK(m.n_views == 8);
    CHECK(log.str().empty());
    std::set<std::string> expected = {"manifest.tsv", "grids/cube.voxg", "grids/sphere.voxg"};
    for (const auto& e : m.entries) {
      CHECK(e.view_index < m.n_views);
      expected.insert(e.relative_path);
    }
    CHECK(files_under(out) == expected);
    CHECK(m.entries[0].shape_id == "cube");
    CHECK(m.entries[8].shape_id == "sphere");
    CHECK(m.entries[3].phi_deg == doctest::Approx(135.0).epsilon(1e-12));
    CHECK(read_manifest(out / "manifest.tsv").entries == m.entries);

    const VoxelGridf grid = read_grid(out / "grids/sphere.voxg");
    CHECK(grid == voxelize(load_obj(meshes / "sphere.obj"), {16, 16.0, true, voxelize_seed(5, "sphere")}));
    const Imaged first = read_image_pgm(out / m.entries[8].relative_path);
    const Imaged rendered = project_silhouette(grid.cast<double>(), Viewpoint(), opts.cfg);
    CHECK((first.values() - rendered.values()).abs().maxCoeff() <= 0.5 / 255 + 1e-12);
  }
  SUBCASE("reruns are byte-identical and thread-independent") {
    const fs::path a = testing::temp_dir("build_a"), b = testing::temp_dir("build_b");
    std::ostringstream log;
    build_dataset(meshes, a, opts, log);
    BuildOptions threaded = opts;
    threaded.threads = 4;
    build_dataset(meshes, b, threaded, log);
    const auto files = files_under(a);
    REQUIRE(files == files_under(b));
    for (const auto& f : files) CHECK(slurp(a / f) == slurp(b / f));
  }
  SUBCASE("semantic datasets write one image per channel") {
    const fs::path parts = testing::temp_dir("build_parts");
    testing::write_cube_obj(parts / "box.obj");
    std::ofstream(parts / "box.labels") << "0\n0\n1\n1\n2\n2\n";
    BuildOptions sem = opts;
    sem.kind = RenderKind::kSemantic;
    const fs::path out = testing::temp_dir("build_parts_out");
    std::ostringstream log;
    const DatasetManifest m = build_dataset(parts, out, sem, log);
    CHECK(m.entries.size() == 24);
    CHECK(m.entries[0].relative_path == "images/box_v0_c0.pgm");
    CHECK(m.entries[2].relative_path == "images/box_v0_c2.pgm");
    CHECK(read_grid(out / "grids/box.voxg").channels() == 3);
  }
  SUBCASE("failing meshes are logged and skipped") {
    const fs::path mixed = testing::temp_dir("build_mixed");
    testing::write_cube_obj(mixed / "good.obj");
    std::ofstream(mixed / "bad.obj") << "v 0 0 0\nf 0 1 2\n";
    std::ostringstream log;
    const DatasetManifest m = build_dataset(mixed, testing::temp_dir("build_mixed_out"), opts, log);
    CHECK(m.entries.size() == 8);
    CHECK(log.str().find("bad.obj") != std::string::npos);

    const fs::path broken = testing::temp_dir("build_broken");
    std::ofstream(broken / "bad.obj") << "v 0 0 0\nf 0 1 2\n";
    CHECK_THROWS(build_dataset(broken, testing::temp_dir("build_broken_out"), opts, log));
  }
  SUBCASE("empty or missing input") {
    std::ostringstream log;
    CHECK_THROWS(build_dataset(testing::temp_dir("build_empty"), testing::temp_dir("build_empty_out"), opts, log));
    CHECK_THROWS_AS(build_dataset(meshes / "nothing", testing::temp_dir("build_none_out"), opts, log), IoError);
  }
}
