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

#include "voxproj/mesh.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "voxproj/random.hpp"

namespace voxproj {
namespace {

// First integer of an OBJ face token such as "7", "7/2", "7//3" or "-1/4/2".
long parse_face_index(std::string_view token, std::size_t line) {
  const auto slash = token.find('/');
  const std::string_view head = token.substr(0, slash);
  long value = 0;
  const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), value);
  if (ec != std::errc() || ptr != head.data() + head.size()) {
    throw ParseError(line, "malformed face index '" + std::string(token) + "'");
  }
  return value;
}

std::vector<int> read_labels(const std::filesystem::path& path, std::size_t faces) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open labels: " + path.string());
  std::vector<int> labels;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(text);
    int label = -1;
    if (!(fields >> label) || label < 0 || label > 254) throw ParseError(line, "bad part label in " + path.string());
    labels.push_back(label);
  }
  if (labels.size() != faces) {
    throw std::runtime_error(path.string() + ": expected " + std::to_string(faces) + " labels, found " +
                             std::to_string(labels.size()));
  }
  return labels;
}

struct Point2 {
  double x, y;
};

bool lex_less(const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

// Signed area of (p, q, t), evaluated from a canonical endpoint order so that two triangles
// sharing the edge get bit-identical magnitudes with opposite signs.
double edge_function(const Point2& p, const Point2& q, const Point2& t) {
  if (lex_less(q, p)) return -edge_function(q, p, t);
  return (q.x - p.x) * (t.y - p.y) - (q.y - p.y) * (t.x - p.x);
}

// Points exactly on an edge belong to one of the two triangles sharing it.
bool owns_edge(const Point2& p, const Point2& q) {
  const double dy = q.y - p.y;
  return dy > 0 || (dy == 0 && q.x - p.x < 0);
}

struct Crossing {
  double z;
  int label;
  bool operator<(const Crossing& o) const { return z < o.z || (z == o.z && label < o.label); }
};

}  // namespace

int TriangleMesh::label_count() const {
  if (labels.empty()) return 1;
  return *std::max_element(labels.begin(), labels.end()) + 1;
}

TriangleMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh: " + path.string());

  TriangleMesh mesh;
  std::vector<std::size_t> face_of_triangle;
  std::size_t faces = 0;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::istringstream fields(text);
    std::string tag;
    if (!(fields >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Eigen::Vector3d v;
      if (!(fields >> v.x() >> v.y() >> v.z()) || !v.allFinite()) throw ParseError(line, "malformed vertex");
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<int> corners;
      std::string token;
      while (fields >> token) {
        const long raw = parse_face_index(token, line);
        const long count = long(mesh.vertices.size());
        const long resolved = raw > 0 ? raw - 1 : count + raw;
        if (raw == 0 || resolved < 0 || resolved >= count) {
          throw ParseError(line, "face index " + std::to_string(raw) + " out of range");
        }
        corners.push_back(int(resolved));
      }
      if (corners.size() < 3) throw ParseError(line, "face with fewer than 3 vertices");
      for (std::size_t i = 1; i + 1 < corners.size(); ++i) {
        mesh.triangles.push_back({corners[0], corners[i], corners[i + 1]});
        face_of_triangle.push_back(faces);
      }
      ++faces;
    }
  }

  auto labels_path = path;
  labels_path.replace_extension(".labels");
  std::vector<int> face_labels;
  if (std::filesystem::exists(labels_path)) face_labels = read_labels(labels_path, faces);

  std::vector<std::array<int, 3>> kept;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& [a, b, c] = mesh.triangles[t];
    const auto& va = mesh.vertices[a];
    const auto& vb = mesh.vertices[b];
    const auto& vc = mesh.vertices[c];
    if (va == vb || vb == vc || va == vc) {
      ++mesh.dropped_degenerate;
      continue;
    }
    kept.push_back(mesh.triangles[t]);
    if (!face_labels.empty()) mesh.labels.push_back(face_labels[face_of_triangle[t]]);
  }
  mesh.triangles = std::move(kept);
  if (mesh.triangles.empty()) throw std::runtime_error("mesh has no triangles: " + path.string());
  return mesh;
}

VoxelGridf voxelize(const TriangleMesh& mesh, const VoxelizeOptions& options) {
  const int n = options.n;
  if (n < 2) throw std::invalid_argument("voxelize: n must be >= 2");
  if (mesh.triangles.empty()) throw std::invalid_argument("voxelize: empty mesh");
  if (!(options.samples_per_area > 0)) throw std::invalid_argument("voxelize: samples_per_area must be > 0");
  if (!mesh.labels.empty() && mesh.labels.size() != mesh.triangles.size()) {
    throw std::invalid_argument("voxelize: label count differs from triangle count");
  }

  // Uniform fit into [0, n)^3 with 5% padding on each side, centered.
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector3d hi = -lo;
  for (const auto& t : mesh.triangles) {
    for (int i : t) {
      lo = lo.cwiseMin(mesh.vertices[i]);
      hi = hi.cwiseMax(mesh.vertices[i]);
    }
  }
  const double extent = (hi - lo).maxCoeff();
  if (!(extent > 0)) throw std::invalid_argument("voxelize: mesh has zero extent");
  const double scale = 0.9 * n / extent;
  const Eigen::Vector3d mid = 0.5 * (lo + hi);
  auto to_grid = [&](const Eigen::Vector3d& p) -> Eigen::Vector3d {
    return (p - mid) * scale + Eigen::Vector3d::Constant(0.5 * n);
  };

  const int channels = mesh.label_count();
  VoxelGridf grid(n, channels);
  auto label_of = [&](std::size_t t) { return mesh.labels.empty() ? 0 : mesh.labels[t]; };
  auto bin = [n](double v) { return std::clamp(int(std::floor(v)), 0, n - 1); };

  Rng rng(options.seed);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Eigen::Vector3d a = to_grid(mesh.vertices[mesh.triangles[t][0]]);
    const Eigen::Vector3d b = to_grid(mesh.vertices[mesh.triangles[t][1]]);
    const Eigen::Vector3d c = to_grid(mesh.vertices[mesh.triangles[t][2]]);
    const double area = 0.5 * (b - a).cross(c - a).norm();
    const long count = std::max(1L, std::lround(area * options.samples_per_area));
    const int channel = label_of(t);
    for (const auto* v : {&a, &b, &c}) grid(channel, bin(v->x()), bin(v->y()), bin(v->z())) = 1.0f;
    for (long s = 0; s < count; ++s) {
      const double r1 = std::sqrt(rng.uniform());
      const double r2 = rng.uniform();
      const Eigen::Vector3d p = (1 - r1) * a + r1 * (1 - r2) * b + r1 * r2 * c;
      grid(channel, bin(p.x()), bin(p.y()), bin(p.z())) = 1.0f;
    }
  }
  if (!options.solid) return grid;

  // Crossings of each z-column through voxel centers.
  std::vector<std::vector<Crossing>> columns(std::size_t(n) * n);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    std::array<Eigen::Vector3d, 3> v;
    for (int i = 0; i < 3; ++i) v[i] = to_grid(mesh.vertices[mesh.triangles[t][i]]);
    std::array<Point2, 3> q{Point2{v[0].x(), v[0].y()}, Point2{v[1].x(), v[1].y()}, Point2{v[2].x(), v[2].y()}};
    double area2 = edge_function(q[0], q[1], q[2]);
    if (area2 == 0) continue;  // parallel to the columns
    if (area2 < 0) {
      std::swap(q[1], q[2]);
      std::swap(v[1], v[2]);
      area2 = -area2;
    }
    const int x0 = std::max(0, int(std::floor(std::min({q[0].x, q[1].x, q[2].x}) - 0.5)));
    const int x1 = std::min(n - 1, int(std::ceil(std::max({q[0].x, q[1].x, q[2].x}) - 0.5)));
    const int y0 = std::max(0, int(std::floor(std::min({q[0].y, q[1].y, q[2].y}) - 0.5)));
    const int y1 = std::min(n - 1, int(std::ceil(std::max({q[0].y, q[1].y, q[2].y}) - 0.5)));
    for (int x = x0; x <= x1; ++x) {
      for (int y = y0; y <= y1; ++y) {
        const Point2 p{x + 0.5, y + 0.5};
        std::array<double, 3> w;
        bool inside = true;
        for (int e = 0; e < 3 && inside; ++e) {
          const Point2& from = q[(e + 1) % 3];
          const Point2& to = q[(e + 2) % 3];
          w[e] = edge_function(from, to, p);
          inside = w[e] > 0 || (w[e] == 0 && owns_edge(from, to));
        }
        if (!inside) continue;
        const double z = (w[0] * v[0].z() + w[1] * v[1].z() + w[2] * v[2].z()) / (w[0] + w[1] + w[2]);
        columns[std::size_t(x) * n + y].push_back({z, label_of(t)});
      }
    }
  }

  const bool watertight =
      std::all_of(columns.begin(), columns.end(), [](const auto& col) { return col.size() % 2 == 0; });
  if (watertight) {
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        auto& col = columns[std::size_t(x) * n + y];
        std::sort(col.begin(), col.end());
        for (std::size_t i = 0; i + 1 < col.size(); i += 2) {
          for (int z = 0; z < n; ++z) {
            if (z + 0.5 >= col[i].z && z + 0.5 < col[i + 1].z) grid(col[i].label, x, y, z) = 1.0f;
          }
        }
      }
    }
    return grid;
  }

  // Exterior flood fill over empty voxels from the boundary; anything unreached is interior and
  // takes the channel of the nearest occupied voxel below it in its column.
  const Index n3 = grid.channel_size();
  std::vector<std::uint8_t> wall(std::size_t(n3), 0);
  for (int c = 0; c < channels; ++c) {
    for (Index i = 0; i < n3; ++i) wall[std::size_t(i)] |= grid.channel(c)[i] > 0;
  }
  std::vector<std::uint8_t> outside(std::size_t(n3), 0);
  std::deque<Index> queue;
  auto visit = [&](int x, int y, int z) {
    const Index i = grid.index(0, x, y, z);
    if (!grid.contains(x, y, z) || wall[std::size_t(i)] || outside[std::size_t(i)]) return;
    outside[std::size_t(i)] = 1;
    queue.push_back(i);
  };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      visit(0, a, b), visit(n - 1, a, b), visit(a, 0, b), visit(a, n - 1, b), visit(a, b, 0), visit(a, b, n - 1);
    }
  }
  while (!queue.empty()) {
    const auto [c, x, y, z] = grid.unravel(queue.front());
    queue.pop_front();
    visit(x + 1, y, z), visit(x - 1, y, z), visit(x, y + 1, z), visit(x, y - 1, z), visit(x, y, z + 1),
        visit(x, y, z - 1);
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      int channel = 0;
      for (int z = 0; z < n; ++z) {
        const Index i = grid.index(0, x, y, z);
        if (wall[std::size_t(i)]) {
          for (int c = 0; c < channels; ++c) {
            if (grid(c, x, y, z) > 0) channel = c;
          }
        } else if (!outside[std::size_t(i)]) {
          grid(channel, x, y, z) = 1.0f;
        }
      }
    }
  }
  return grid;
}

}  // namespace voxproj
