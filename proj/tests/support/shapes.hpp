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

#ifndef VOXPROJ_TESTS_SUPPORT_SHAPES_HPP
#define VOXPROJ_TESTS_SUPPORT_SHAPES_HPP

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include "voxproj/grid.hpp"
#include "voxproj/random.hpp"

namespace voxproj::testing {

inline VoxelGridd solid_sphere(int n, double radius) {
  VoxelGridd g(n);
  const double c = 0.5 * (n - 1);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if ((x - c) * (x - c) + (y - c) * (y - c) + (z - c) * (z - c) <= radius * radius) g(x, y, z) = 1;
  return g;
}

/// Solid box [lo, hi)^3 with a cavity of the given depth opened toward z = 0.
inline VoxelGridd box_with_cavity(int n, int lo, int hi, int wall, int depth) {
  VoxelGridd g(n);
  for (int x = lo; x < hi; ++x)
    for (int y = lo; y < hi; ++y)
      for (int z = lo; z < hi; ++z) {
        const bool cavity = x >= lo + wall && x < hi - wall && y >= lo + wall && y < hi - wall && z < lo + depth;
        g(x, y, z) = cavity ? 0 : 1;
      }
  return g;
}

inline VoxelGridd random_grid(int n, int channels, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  Rng rng(seed);
  VoxelGridd g(n, channels);
  for (double& v : g.values()) v = rng.uniform(lo, hi);
  return g;
}

/// Part-style random grid: per voxel the channel values sum to a total in [0.05, 0.95].
inline VoxelGridd random_parts(int n, int channels, std::uint64_t seed) {
  Rng rng(seed);
  VoxelGridd g(n, channels);
  for (Index i = 0; i < g.channel_size(); ++i) {
    double raw[16];
    double sum = 0;
    for (int c = 0; c < channels; ++c) sum += raw[c] = rng.uniform(0.05, 1.0);
    const double total = rng.uniform(0.05, 0.95);
    for (int c = 0; c < channels; ++c) g.channel(c)[i] = total * raw[c] / sum;
  }
  return g;
}

inline VoxelGridd random_binary(int n, std::uint64_t seed, double density = 0.3) {
  Rng rng(seed);
  VoxelGridd g(n);
  for (double& v : g.values()) v = rng.uniform() < density ? 1.0 : 0.0;
  return g;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("voxproj_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Axis-aligned cube [-1, 1]^3 as 8 vertices and 6 quads (12 triangles after triangulation).
inline void write_cube_obj(const std::filesystem::path& path, bool quads = true) {
  std::ofstream out(path);
  out << "# cube\n";
  for (int i = 0; i < 8; ++i) out << "v " << (i & 1 ? 1 : -1) << ' ' << (i & 2 ? 1 : -1) << ' ' << (i & 4 ? 1 : -1) << '\n';
  const int faces[6][4] = {{1, 3, 7, 5}, {2, 6, 8, 4}, {1, 5, 6, 2}, {3, 4, 8, 7}, {1, 2, 4, 3}, {5, 7, 8, 6}};
  for (const auto& f : faces) {
    if (quads) {
      out << "f " << f[0] << ' ' << f[1] << ' ' << f[2] << ' ' << f[3] << '\n';
    } else {
      out << "f " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
      out << "f " << f[0] << ' ' << f[2] << ' ' << f[3] << '\n';
    }
  }
}

/// Closed UV sphere of unit radius.
inline void write_sphere_obj(const std::filesystem::path& path, int stacks = 24, int slices = 48) {
  std::ofstream out(path);
  out.precision(17);
  out << "v 0 1 0\n";
  for (int i = 1; i < stacks; ++i) {
    const double t = std::numbers::pi * i / stacks;
    for (int j = 0; j < slices; ++j) {
      const double p = 2 * std::numbers::pi * j / slices;
      out << "v " << std::sin(t) * std::cos(p) << ' ' << std::cos(t) << ' ' << std::sin(t) * std::sin(p) << '\n';
    }
  }
  out << "v 0 -1 0\n";
  const int bottom = 2 + (stacks - 1) * slices;
  auto ring = [&](int i, int j) { return 2 + (i - 1) * slices + (j % slices); };
  for (int j = 0; j < slices; ++j) out << "f 1 " << ring(1, j + 1) << ' ' << ring(1, j) << '\n';
  for (int i = 1; i + 1 < stacks; ++i)
    for (int j = 0; j < slices; ++j)
      out << "f " << ring(i, j) << ' ' << ring(i, j + 1) << ' ' << ring(i + 1, j + 1) << ' ' << ring(i + 1, j) << '\n';
  for (int j = 0; j < slices; ++j) out << "f " << bottom << ' ' << ring(stacks - 1, j) << ' ' << ring(stacks - 1, j + 1) << '\n';
}

}  // namespace voxproj::testing

#endif  // VOXPROJ_TESTS_SUPPORT_SHAPES_HPP
