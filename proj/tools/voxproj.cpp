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

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "voxproj/voxproj.hpp"

namespace fs = std::filesystem;
using namespace voxproj;

namespace {

constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

/// Failure of the inputs a command was given, reported with exit code 1.
struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
};

std::string fmt(double v, int precision = 9) {
  std::ostringstream out;
  out << std::setprecision(precision) << v;
  return out.str();
}

std::vector<fs::path> files_with_extension(const fs::path& input, const std::string& ext) {
  if (!fs::exists(input)) throw IoError("no such file or directory: " + input.string());
  if (!fs::is_directory(input)) return {input};
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(input)) {
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Index occupied_cells(const VoxelGridf& g) {
  Index count = 0;
  for (Index i = 0; i < g.channel_size(); ++i) {
    bool any = false;
    for (int c = 0; c < g.channels(); ++c) any = any || g.channel(c)[i] > 0;
    count += any;
  }
  return count;
}

void add_projection_flags(CLI::App* cmd, ProjectionConfig& cfg) {
  static const std::map<std::string, Resampling> modes{{"nearest", Resampling::kNearest},
                                                       {"trilinear", Resampling::kTrilinear}};
  cmd->add_option("--resampling", cfg.resampling, "Rotation resampling")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case))
      ->default_str("trilinear");
  cmd->add_option("--supersample", cfg.supersample, "Rays per pixel side")->check(CLI::Range(1, 16))->capture_default_str();
  cmd->add_option("--tau", cfg.tau, "Depth accessibility falloff")->check(CLI::PositiveNumber)->capture_default_str();
}

// ---------------------------------------------------------------------------------------------

struct VoxelizeCmd {
  fs::path in, out;
  VoxelizeOptions opts{32, 16.0, false, 0};

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("voxelize", "Voxelize OBJ meshes into VOXG grids");
    cmd->add_option("--in", in, "OBJ file or directory")->required();
    cmd->add_option("--out", out, "Output directory")->required();
    cmd->add_option("--n", opts.n, "Grid side")->check(CLI::Range(2, 1024))->capture_default_str();
    cmd->add_flag("--solid", opts.solid, "Fill the interior");
    cmd->add_option("--samples", opts.samples_per_area, "Surface samples per squared voxel")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  int run(const Globals& g) {
    const auto meshes = list_meshes(in);
    if (meshes.empty()) throw RuntimeFailure("no OBJ meshes in " + in.string());
    fs::create_directories(out);
    std::vector<std::optional<VoxelGridf>> grids(meshes.size());
    std::vector<std::string> errors(meshes.size());
    parallel_for(meshes.size(), g.threads, [&](std::size_t i) {
      try {
        VoxelizeOptions o = opts;
        o.seed = voxelize_seed(g.seed, meshes[i].stem().string());
        grids[i] = voxelize(load_obj(meshes[i]), o);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
    int written = 0;
    for (std::size_t i = 0; i < meshes.size(); ++i) {
      const std::string id = meshes[i].stem().string();
      if (!grids[i]) {
        std::cerr << "warning: skipping " << meshes[i].string() << ": " << errors[i] << '\n';
        continue;
      }
      write_grid(*grids[i], out / (id + ".voxg"));
      std::cout << id << " occ=" << occupied_cells(*grids[i]) << '\n';
      ++written;
    }
    if (written == 0) throw RuntimeFailure("every mesh failed");
    return 0;
  }
};

// ---------------------------------------------------------------------------------------------

struct RenderCmd {
  fs::path grid, out;
  std::string kind = "silhouette";
  int views = 8;
  ProjectionConfig cfg;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("render", "Render VOXG grids into a PGM dataset with a manifest");
    cmd->add_option("--grid", grid, "VOXG file or directory")->required();
    cmd->add_option("--out", out, "Output directory")->required();
    cmd->add_option("--kind", kind, "silhouette, depth or semantic")
        ->check(CLI::IsMember({"silhouette", "depth", "semantic"}))
        ->capture_default_str();
    cmd->add_option("--views", views, "Evenly spaced azimuths")->check(CLI::Range(1, 360))->capture_default_str();
    add_projection_flags(cmd, cfg);
  }

  int run(const Globals& g) {
    std::vector<std::pair<std::string, VoxelGridd>> grids;
    for (const auto& path : files_with_extension(grid, ".voxg")) {
      grids.emplace_back(path.stem().string(), read_grid(path).cast<double>());
    }
    if (grids.empty()) throw RuntimeFailure("no VOXG grids in " + grid.string());
    const DatasetManifest m = render_dataset(grids, out, ViewpointSet::Evenly(views), parse_render_kind(kind), cfg, g.threads);
    for (const auto& [id, _] : grids) {
      const auto rows = std::count_if(m.entries.begin(), m.entries.end(), [&](const auto& e) { return e.shape_id == id; });
      std::cout << id << " images=" << rows << '\n';
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------------------------

struct ReconstructCmd {
  std::vector<fs::path> manifests;
  std::string shape;
  fs::path out, losscurve, truth;
  ReconOptions opts;
  ProjectionConfig cfg;
  double threshold = 0.5;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("reconstruct", "Fit a voxel grid to the rendered views of one shape");
    cmd->add_option("--manifest", manifests, "Dataset manifest; repeat to combine render kinds")->required();
    cmd->add_option("--shape", shape, "Shape id")->required();
    cmd->add_option("--out", out, "Output VOXG file")->required();
    cmd->add_option("--iters", opts.iters, "Iterations")->check(CLI::Range(1, 1000000))->capture_default_str();
    cmd->add_option("--step", opts.step, "Logit step")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--losscurve", losscurve, "Write iteration<TAB>loss lines here");
    cmd->add_option("--truth", truth, "Ground-truth VOXG grid to score against");
    cmd->add_option("--threshold", threshold, "Binarization threshold for the IoU")->capture_default_str();
    add_projection_flags(cmd, cfg);
  }

  ReconProblem load_problem() const {
    ReconProblem problem;
    problem.cfg = cfg;
    for (const auto& path : manifests) {
      const DatasetManifest m = read_manifest(path);
      // Semantic datasets store one row per channel; rows of one view are consecutive.
      std::vector<std::pair<const ManifestEntry*, std::vector<Imaged>>> views;
      for (const auto& e : m.entries) {
        if (e.shape_id != shape) continue;
        const Imaged img = read_image_pgm(path.parent_path() / e.relative_path);
        if (!views.empty() && views.back().first->view_index == e.view_index && e.kind == RenderKind::kSemantic) {
          views.back().second.push_back(img);
        } else {
          views.push_back({&e, {img}});
        }
      }
      for (const auto& [entry, planes] : views) {
        const int side = planes.front().width();
        Imaged image(planes.front().height(), side, int(planes.size()));
        for (std::size_t c = 0; c < planes.size(); ++c) image.channel(int(c)) = planes[c].values();
        problem.targets.push_back({image, Viewpoint::Degrees(entry->theta_deg, entry->phi_deg), entry->kind});
        problem.n = side;
      }
    }
    if (problem.targets.empty()) throw RuntimeFailure("shape '" + shape + "' not found in the given manifests");
    return problem;
  }

  int run(const Globals& g) {
    const ReconProblem problem = load_problem();
    ReconOptions o = opts;
    o.seed = g.seed;
    o.threads = g.threads;
    const ReconReport report = reconstruct(problem, o);
    write_grid(report.grid.cast<float>(), out);
    if (!losscurve.empty()) {
      std::ofstream curve(losscurve, std::ios::binary | std::ios::trunc);
      if (!curve) throw IoError("cannot open for writing: " + losscurve.string());
      for (const auto& [iter, loss] : report.loss_curve) curve << iter << '\t' << fmt(loss, 17) << '\n';
    }
    std::cout << "loss=" << fmt(report.loss_curve.back().second) << '\n';
    if (!truth.empty()) {
      const VoxelGridd t = read_grid(truth).cast<double>();
      std::cout << "iou=" << fmt(evaluate_recon(report.grid, t, threshold), 6) << '\n';
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------------------------

struct EvaluateCmd {
  fs::path set_a, set_b;
  std::string metric = "mmd";
  std::optional<double> bandwidth;
  double threshold = 0.001;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("evaluate", "Compare two directories of grids or images");
    cmd->add_option("--set-a", set_a, "Generated set (VOXG or PGM files)")->required();
    cmd->add_option("--set-b", set_b, "Reference set (VOXG or PGM files)")->required();
    cmd->add_option("--metric", metric, "mmd or chamfer")->check(CLI::IsMember({"mmd", "chamfer"}))->capture_default_str();
    cmd->add_option("--bandwidth", bandwidth, "Kernel bandwidth [default 1e-3 for images, 1e-2 for grids]")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threshold", threshold, "Binarization threshold")->capture_default_str();
  }

  struct Loaded {
    ShapeSet set;
    bool grids = false;
  };

  Loaded load(const fs::path& dir) const {
    Loaded out;
    auto grids = files_with_extension(dir, ".voxg");
    if (!grids.empty()) {
      out.grids = true;
      std::vector<BinaryArray> items;
      int side = 0;
      for (const auto& path : grids) {
        const VoxelGridf g = read_grid(path);
        Eigen::ArrayXf occupancy = g.channel(0);
        for (int c = 1; c < g.channels(); ++c) occupancy = occupancy.max(g.channel(c).array());
        items.push_back(binarize(occupancy, threshold));
        side = g.n();
      }
      out.set = ShapeSet(std::move(items), side);
      return out;
    }
    std::vector<BinaryArray> items;
    for (const auto& path : files_with_extension(dir, ".pgm")) items.push_back(binarize(read_image_pgm(path).values(), threshold));
    if (items.empty()) throw RuntimeFailure("no VOXG or PGM files in " + dir.string());
    out.set = ShapeSet(std::move(items));
    return out;
  }

  int run(const Globals& g) {
    const Loaded a = load(set_a), b = load(set_b);
    if (a.grids != b.grids) throw RuntimeFailure("sets differ in item type (grids vs images)");
    if (metric == "mmd") {
      const double bw = bandwidth.value_or(a.grids ? 1e-2 : 1e-3);
      std::cout << "mmd=" << fmt(mmd(a.set, b.set, bw, g.threads)) << '\n';
    } else {
      if (!a.grids) throw RuntimeFailure("chamfer needs VOXG grids");
      const ChamferIou c = chamfer_iou(a.set, b.set, g.threads);
      std::cout << "coverage=" << fmt(c.coverage, 6) << " accuracy=" << fmt(c.accuracy, 6)
                << " avg=" << fmt(c.average, 6) << '\n';
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------------------------

struct GradcheckCmd {
  std::string kind = "all";
  int n = 6;
  int trials = 20;
  double eps = 1e-3;
  bool richardson = false;
  static constexpr double kTolerance = 1e-4;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("gradcheck", "Compare analytic gradients with central differences");
    cmd->add_option("--kind", kind, "all, silhouette, depth or semantic")
        ->check(CLI::IsMember({"all", "silhouette", "depth", "semantic"}))
        ->capture_default_str();
    cmd->add_option("--n", n, "Grid side")->check(CLI::Range(1, 32))->capture_default_str();
    cmd->add_option("--trials", trials, "Random grids per kind")->check(CLI::Range(1, 100000))->capture_default_str();
    cmd->add_option("--eps", eps, "Finite-difference step")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_flag("--richardson", richardson, "Extrapolate central differences at eps and eps/2");
  }

  // Occupancies in (0, 1); semantic channels sum to at most 0.95 per voxel, away from the clamp at 1.
  static VoxelGridd random_grid(RenderKind k, int n, Rng& rng) {
    const int channels = k == RenderKind::kSemantic ? 3 : 1;
    VoxelGridd g(n, channels);
    for (Index i = 0; i < g.channel_size(); ++i) {
      if (channels == 1) {
        g.values()[i] = rng.uniform(0.05, 0.95);
        continue;
      }
      double raw[3], sum = 0;
      for (double& r : raw) sum += r = rng.uniform(0.05, 1.0);
      const double total = rng.uniform(0.05, 0.95);
      for (int c = 0; c < channels; ++c) g.channel(c)[i] = total * raw[c] / sum;
    }
    return g;
  }

  int run(const Globals& g) {
    std::vector<RenderKind> kinds;
    if (kind == "all") {
      kinds = {RenderKind::kSilhouette, RenderKind::kDepth, RenderKind::kSemantic};
    } else {
      kinds = {parse_render_kind(kind)};
    }
    const ViewpointSet views;
    const ProjectionConfig cfg{1.0, Resampling::kTrilinear, 1};
    bool ok = true;
    for (RenderKind k : kinds) {
      std::vector<double> errors(std::size_t(trials), 0.0);
      parallel_for(errors.size(), g.threads, [&](std::size_t t) {
        Rng rng(stream_seed(g.seed, "gradcheck/" + std::string(to_string(k)) + "/" + std::to_string(t)));
        const VoxelGridd grid = random_grid(k, n, rng);
        const Viewpoint& view = views[rng.below(views.size())];
        errors[t] = grad_check(k, grid, view, cfg, eps, rng.next(),
                               richardson ? FiniteDifference::kRichardson : FiniteDifference::kCentral);
      });
      const double worst = *std::max_element(errors.begin(), errors.end());
      ok = ok && worst <= kTolerance;
      std::cout << to_string(k) << " max_rel_err=" << fmt(worst, 6) << '\n';
    }
    if (!ok) std::cerr << "error: relative error above " << kTolerance << '\n';
    return ok ? 0 : kRuntimeFailure;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentiable voxel projection toolkit"};
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--seed", globals.seed, "Seed for every random stream")->capture_default_str();
  app.add_option("--threads", globals.threads, "Worker threads")->check(CLI::Range(1, 1024))->capture_default_str();

  VoxelizeCmd voxelize_cmd;
  RenderCmd render_cmd;
  ReconstructCmd reconstruct_cmd;
  EvaluateCmd evaluate_cmd;
  GradcheckCmd gradcheck_cmd;
  voxelize_cmd.attach(app);
  render_cmd.attach(app);
  reconstruct_cmd.attach(app);
  evaluate_cmd.attach(app);
  gradcheck_cmd.attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    const auto* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    if (name == "voxelize") return voxelize_cmd.run(globals);
    if (name == "render") return render_cmd.run(globals);
    if (name == "reconstruct") return reconstruct_cmd.run(globals);
    if (name == "evaluate") return evaluate_cmd.run(globals);
    return gradcheck_cmd.run(globals);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}
