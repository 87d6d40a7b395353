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

#include <cmath>

#include "support/shapes.hpp"
#include "voxproj/errors.hpp"
#include "voxproj/metrics.hpp"
#include "voxproj/reconstruct.hpp"
#include "voxproj/sampling.hpp"

using namespace voxproj;

namespace {

const ProjectionConfig kExact{1.0, Resampling::kNearest, 1};

std::vector<Imaged> binary_silhouettes(const VoxelGridd& g, const std::vector<Viewpoint>& views) {
  std::vector<Imaged> out;
  for (const auto& v : views) {
    Imaged img = project_silhouette(g, v, kExact);
    img.values() = (img.values() > 0.5).cast<double>();
    out.push_back(img);
  }
  return out;
}

std::vector<Viewpoint> azimuths() { return ViewpointSet().views(); }

ReconProblem silhouette_problem(const VoxelGridd& truth, const ProjectionConfig& cfg) {
  ReconProblem p;
  p.n = truth.n();
  p.cfg = cfg;
  for (const auto& v : azimuths()) p.targets.push_back({project_silhouette(truth, v, cfg), v, RenderKind::kSilhouette});
  return p;
}

}  // namespace

TEST_CASE("zero iterations return the initial grid and its loss") {
  const ReconProblem p = silhouette_problem(testing::solid_sphere(8, 3), kExact);
  const ReconReport r = reconstruct(p, {0, 0.05, 10, 3, 1});
  REQUIRE(r.loss_curve.size() == 1);
  CHECK(r.loss_curve[0].first == 0);
  CHECK(r.halvings == 0);
  CHECK(((r.grid.values() - 0.5).abs() <= 0.0025).all());
  CHECK((r.grid.values() != 0.5).any());
  std::vector<Projector> projectors;
  for (const auto& t : p.targets) projectors.emplace_back(t.kind, p.n, t.view, p.cfg);
  CHECK(r.loss_curve[0].second == reconstruction_loss(p, projectors, r.grid).first);
  double residual_sum = 0;
  for (double v : r.residuals) residual_sum += v;
  CHECK(r.residuals.size() == p.targets.size());
  CHECK(residual_sum == doctest::Approx(r.loss_curve[0].second).epsilon(1e-12));
}

TEST_CASE("reconstruction_loss gradient matches central differences") {
  ReconProblem p = silhouette_problem(testing::solid_sphere(5, 2), ProjectionConfig{1.0, Resampling::kTrilinear, 1});
  p.targets.push_back({project_depth(testing::solid_sphere(5, 2), Viewpoint(0, 0), p.cfg), Viewpoint(0, 0), RenderKind::kDepth});
  std::vector<Projector> projectors;
  for (const auto& t : p.targets) projectors.emplace_back(t.kind, p.n, t.view, p.cfg);
  const VoxelGridd g = testing::random_grid(5, 1, 8, 0.1, 0.9);
  const auto [loss, grad] = reconstruction_loss(p, projectors, g);
  CHECK(reconstruction_loss(p, projectors, g, 3).first == loss);
  CHECK(reconstruction_loss(p, projectors, g, 3).second == grad);
  VoxelGridd probe = g;
  const double eps = 1e-4;
  for (Index i = 0; i < g.size(); i += 7) {
    probe.values()[i] = g.values()[i] + eps;
    const double plus = reconstruction_loss(p, projectors, probe).first;
    probe.values()[i] = g.values()[i] - eps;
    const double minus = reconstruction_loss(p, projectors, probe).first;
    probe.values()[i] = g.values()[i];
    CHECK((plus - minus) / (2 * eps) == doctest::Approx(grad.values()[i]).epsilon(1e-5));
  }
}

TEST_CASE("small silhouette reconstruction") {
  const VoxelGridd truth = testing::solid_sphere(12, 4);
  const ReconProblem p = silhouette_problem(truth, kExact);
  const ReconOptions opts{150, 0.05, 10, 1, 1};
  const ReconReport r = reconstruct(p, opts);
  REQUIRE(r.loss_curve.size() == 151);
  CHECK(r.loss_curve.back().second < 0.1 * r.loss_curve.front().second);
  if (r.halvings < opts.max_halvings) {
    for (std::size_t i = 1; i < r.loss_curve.size(); ++i) CHECK(r.loss_curve[i].second <= r.loss_curve[i - 1].second);
  }

  std::vector<Projector> projectors;
  for (const auto& t : p.targets) projectors.emplace_back(t.kind, p.n, t.view, p.cfg);
  CHECK(r.loss_curve.back().second == reconstruction_loss(p, projectors, r.grid).first);

  const VoxelGridd hull = visual_hull(binary_silhouettes(truth, azimuths()), azimuths(), 12);
  CHECK(evaluate_recon(r.grid, hull, 0.5) >= 0.8);

  // Carving the binarized result with the same silhouettes removes almost nothing.
  const BinaryArray result = binarize(r.grid, 0.5);
  const BinaryArray carved = result * binarize(hull, 0.5);
  CHECK(double((result - carved).cast<int>().sum()) < 0.05 * double(result.cast<int>().sum()));

  SUBCASE("deterministic and thread-independent") {
    const ReconReport again = reconstruct(p, opts);
    CHECK(again.loss_curve == r.loss_curve);
    CHECK(again.grid == r.grid);
    ReconOptions threaded = opts;
    threaded.threads = 4;
    CHECK(reconstruct(p, threaded).loss_curve == r.loss_curve);
    ReconOptions other = opts;
    other.seed = 2;
    CHECK(reconstruct(p, other).loss_curve[0] != r.loss_curve[0]);
  }
}

TEST_CASE("step halving keeps the loss from increasing") {
  const ReconProblem p = silhouette_problem(testing::solid_sphere(8, 3), kExact);
  const ReconReport r = reconstruct(p, {60, 4.0, 10, 0, 1});
  CHECK(r.halvings >= 1);
  CHECK(r.halvings <= 10);
  CHECK(r.loss_curve.back().second <= r.loss_curve.front().second);
}

TEST_CASE("reconstruct argument checks") {
  ReconProblem p = silhouette_problem(testing::solid_sphere(6, 2), kExact);
  CHECK_THROWS(reconstruct(p, {-1, 0.05, 10, 0, 1}));
  CHECK_THROWS(reconstruct(p, {10, 0.0, 10, 0, 1}));
  ReconProblem empty = p;
  empty.targets.clear();
  CHECK_THROWS(reconstruct(empty, {}));
  ReconProblem wrong_side = p;
  wrong_side.n = 7;
  CHECK_THROWS_AS(reconstruct(wrong_side, {}), ShapeError);
  ReconProblem mixed = p;
  mixed.targets.push_back({Imaged(6, 6, 2), Viewpoint(), RenderKind::kSemantic});
  CHECK_THROWS(reconstruct(mixed, {}));
}

TEST_CASE("semantic targets reconstruct a multi-channel grid") {
  VoxelGridd parts(8, 2);
  for (int x = 2; x < 6; ++x)
    for (int y = 2; y < 6; ++y)
      for (int z = 2; z < 6; ++z) parts(y < 4 ? 0 : 1, x, y, z) = 1;
  ReconProblem p;
  p.n = 8;
  p.cfg = kExact;
  for (const auto& v : azimuths()) p.targets.push_back({project_semantic(parts, v, kExact), v, RenderKind::kSemantic});
  CHECK(p.channels() == 2);
  const ReconReport r = reconstruct(p, {100, 0.05, 10, 0, 1});
  CHECK(r.grid.channels() == 2);
  CHECK(r.loss_curve.back().second < 0.2 * r.loss_curve.front().second);
}

TEST_CASE("visual_hull") {
  const int n = 32;
  const auto views = azimuths();
  SUBCASE("an all-ones silhouette carves nothing") {
    Imaged ones(n, n);
    ones.values().setOnes();
    CHECK((visual_hull({ones}, {Viewpoint()}, n).values() == 1).all());
  }
  SUBCASE("an all-zero silhouette carves everything that view observes") {
    std::vector<Imaged> sils = binary_silhouettes(testing::solid_sphere(n, 10), views);
    sils[4].values().setZero();
    CHECK((visual_hull(sils, views, n).values() == 0).all());

    // Nearest gather at 45 degrees never reads some voxels; those are unconstrained by that view.
    sils = binary_silhouettes(testing::solid_sphere(n, 10), views);
    sils[5].values().setZero();
    const VoxelGridd hull = visual_hull(sils, views, n);
    const Eigen::ArrayXd observed = RaySampler(n, views[5], kExact).scatter(Eigen::ArrayXd::Ones(Index(n) * n * n));
    CHECK((hull.values() * observed == 0).all());
    CHECK((hull.values() > 0).any());
  }
  SUBCASE("sphere hull is a tight outer bound") {
    const VoxelGridd sphere = testing::solid_sphere(n, 10);
    const VoxelGridd hull = visual_hull(binary_silhouettes(sphere, views), views, n);
    CHECK((hull.values() >= sphere.values()).all());
    CHECK(((hull.values() == 0) || (hull.values() == 1)).all());
    const double v = evaluate_recon(hull, sphere, 0.5);
    CHECK(v >= 0.9);
    CHECK(v <= 1.0);
  }
  SUBCASE("hull contains random grids seen consistently") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const VoxelGridd g = testing::random_binary(10, seed, 0.1);
      std::vector<Viewpoint> vs = {Viewpoint(0, 0), Viewpoint::Degrees(30, 45), Viewpoint::Degrees(-20, 200)};
      CHECK((visual_hull(binary_silhouettes(g, vs), vs, 10).values() >= g.values()).all());
    }
  }
  SUBCASE("input checks") {
    const auto sils = binary_silhouettes(testing::solid_sphere(8, 3), views);
    CHECK_THROWS(visual_hull(sils, {Viewpoint()}, 8));
    CHECK_THROWS_AS(visual_hull(sils, views, 9), ShapeError);
    std::vector<Imaged> soft = sils;
    soft[0](3, 3) = 0.5;
    CHECK_THROWS(visual_hull(soft, views, 8));
  }
}

TEST_CASE("evaluate_recon") {
  const VoxelGridd sphere = testing::solid_sphere(8, 3);
  CHECK(evaluate_recon(sphere, sphere, 0.5) == 1.0);
  CHECK(evaluate_recon(VoxelGridd(8), sphere, 0.5) == 0.0);
  CHECK_THROWS_AS(evaluate_recon(VoxelGridd(7), sphere, 0.5), ShapeError);
}
