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

#include "voxproj/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "voxproj/parallel.hpp"
#include "voxproj/projection.hpp"

namespace voxproj {
namespace {

void check_same(const BinaryArray& a, const BinaryArray& b, const char* who) {
  if (a.size() != b.size()) throw ShapeError(std::string(who) + ": operands differ in size");
}

void check_cubic(const BinaryArray& a, int side, const char* who) {
  if (side < 1 || a.size() != Index(side) * side * side) throw ShapeError(std::string(who) + ": expects a cubic grid");
}

// Sum of k(x, y) over y in `others` for every x in `items`, reduced in index order.
double kernel_sum(const ShapeSet& items, const ShapeSet& others, double bandwidth, int threads) {
  std::vector<double> rows(items.size());
  parallel_for(items.size(), threads, [&](std::size_t i) {
    double row = 0;
    for (const auto& y : others.items()) row += std::exp(-hamming_mean(items[i], y) / bandwidth);
    rows[i] = row;
  });
  double total = 0;
  for (double r : rows) total += r;
  return total;
}

}  // namespace

ShapeSet::ShapeSet(std::vector<BinaryArray> items, int side) : side_(side) {
  items_.reserve(items.size());
  for (auto& item : items) push_back(std::move(item));
}

void ShapeSet::push_back(BinaryArray item) {
  if (!items_.empty() && item.size() != items_.front().size()) throw ShapeError("ShapeSet: items differ in shape");
  if ((item > 1).any()) throw std::invalid_argument("ShapeSet: items must be binary");
  if (side_ > 0) check_cubic(item, side_, "ShapeSet");
  items_.push_back(std::move(item));
}

double hamming_mean(const BinaryArray& a, const BinaryArray& b) {
  check_same(a, b, "hamming_mean");
  if (a.size() == 0) return 0;
  return double((a != b).count()) / double(a.size());
}

double mmd(const ShapeSet& a, const ShapeSet& b, double bandwidth, int threads) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mmd: empty set");
  if (a.dimension() != b.dimension()) throw ShapeError("mmd: sets differ in item shape");
  if (!(bandwidth > 0)) throw std::invalid_argument("mmd: bandwidth must be > 0");
  const double na = double(a.size());
  const double nb = double(b.size());
  const double within_a = kernel_sum(a, a, bandwidth, threads) / (na * na);
  const double within_b = kernel_sum(b, b, bandwidth, threads) / (nb * nb);
  const double cross = kernel_sum(a, b, bandwidth, threads) / (na * nb);
  return std::max(0.0, within_a + within_b - 2 * cross);
}

double iou(const BinaryArray& a, const BinaryArray& b) {
  check_same(a, b, "iou");
  const auto both = (a != 0) && (b != 0);
  const auto either = (a != 0) || (b != 0);
  const Index uni = either.count();
  if (uni == 0) return 1.0;
  return double(both.count()) / double(uni);
}

std::vector<BinaryArray> azimuth_rotations(const BinaryArray& grid, int side) {
  check_cubic(grid, side, "azimuth_rotations");
  const VoxelGridd source(side, 1, grid.cast<double>());
  ProjectionConfig cfg;
  cfg.resampling = Resampling::kNearest;
  std::vector<BinaryArray> out;
  for (const Viewpoint& view : ViewpointSet()) out.push_back(binarize(rotate_grid(source, view, cfg), 0.5));
  return out;
}

Alignment align_best_rotation(const BinaryArray& g, const BinaryArray& x, int side) {
  check_same(g, x, "align_best_rotation");
  const auto rotations = azimuth_rotations(g, side);
  Alignment best{0, -1.0};
  for (int i = 0; i < int(rotations.size()); ++i) {
    const double value = iou(rotations[i], x);
    if (value > best.iou) best = {i, value};
  }
  return best;
}

ChamferIou chamfer_iou(const ShapeSet& generated, const ShapeSet& dataset, int threads) {
  if (generated.empty() || dataset.empty()) throw std::invalid_argument("chamfer_iou: empty set");
  if (generated.dimension() != dataset.dimension()) throw ShapeError("chamfer_iou: sets differ in item shape");
  const int side = generated.side() > 0 ? generated.side() : dataset.side();
  const std::size_t ng = generated.size();
  const std::size_t nd = dataset.size();

  // aligned[g * nd + x] = best IoU of generated g, rotated, against dataset x
  std::vector<double> aligned(ng * nd);
  parallel_for(ng, threads, [&](std::size_t g) {
    const auto rotations = azimuth_rotations(generated[g], side);
    for (std::size_t x = 0; x < nd; ++x) {
      double best = 0;
      for (const auto& r : rotations) best = std::max(best, iou(r, dataset[x]));
      aligned[g * nd + x] = best;
    }
  });

  double coverage = 0;
  for (std::size_t x = 0; x < nd; ++x) {
    double best = 0;
    for (std::size_t g = 0; g < ng; ++g) best = std::max(best, aligned[g * nd + x]);
    coverage += best;
  }
  double accuracy = 0;
  for (std::size_t g = 0; g < ng; ++g) {
    double best = 0;
    for (std::size_t x = 0; x < nd; ++x) best = std::max(best, aligned[g * nd + x]);
    accuracy += best;
  }
  coverage /= double(nd);
  accuracy /= double(ng);
  return {coverage, accuracy, 0.5 * (coverage + accuracy)};
}

}  // namespace voxproj
