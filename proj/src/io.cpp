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

#include "voxproj/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace voxproj {
namespace {

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

void put_u16(std::vector<char>& out, std::uint16_t v) {
  out.push_back(char(v & 0xff));
  out.push_back(char(v >> 8));
}

void put_u32(std::vector<char>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(char((v >> shift) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

void write_bytes(const std::filesystem::path& path, const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(bytes.data(), std::streamsize(bytes.size()));
  out.close();
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

void write_grid(const VoxelGridf& grid, const std::filesystem::path& path) {
  if (grid.channels() > 255 || grid.n() > 65535) throw ShapeError("write_grid: grid too large for VOXG header");
  if (!grid.is_occupancy()) {
    throw FormatError(FormatError::Kind::kOutOfRange, "write_grid: occupancy outside [0,1] for " + path.string());
  }
  std::vector<char> bytes{'V', 'O', 'X', 'G', char(kVoxgVersion), char(grid.channels())};
  put_u16(bytes, std::uint16_t(grid.n()));
  bytes.reserve(kVoxgHeaderSize + 4 * std::size_t(grid.size()));
  for (float v : grid.values()) put_u32(bytes, std::bit_cast<std::uint32_t>(v));
  write_bytes(path, bytes);
}

VoxelGridf read_grid(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  const std::string where = " in " + path.string();
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "VOXG", 4) != 0) {
    throw FormatError(FormatError::Kind::kBadMagic, "bad VOXG magic" + where);
  }
  if (bytes.size() < kVoxgHeaderSize) throw FormatError(FormatError::Kind::kTruncated, "truncated VOXG header" + where);
  if (bytes[4] != kVoxgVersion) {
    throw FormatError(FormatError::Kind::kUnsupportedVersion, "unsupported VOXG version" + where);
  }
  const int channels = bytes[5];
  const int n = int(bytes[6]) | int(bytes[7]) << 8;
  if (channels < 1 || n < 1) throw FormatError(FormatError::Kind::kBadHeader, "zero channels or side" + where);

  const std::size_t count = std::size_t(channels) * n * n * n;
  if (bytes.size() != kVoxgHeaderSize + 4 * count) {
    throw FormatError(FormatError::Kind::kTruncated, "VOXG payload size mismatch" + where);
  }
  VoxelGridf::Values values(count);
  const unsigned char* p = bytes.data() + kVoxgHeaderSize;
  for (std::size_t i = 0; i < count; ++i, p += 4) {
    const float v = std::bit_cast<float>(get_u32(p));
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw FormatError(FormatError::Kind::kOutOfRange, "occupancy outside [0,1] at element " + std::to_string(i) + where);
    }
    values[Index(i)] = v;
  }
  return VoxelGridf(n, channels, std::move(values));
}

std::uint8_t to_pgm_byte(double v) {
  const double scaled = std::floor(255.0 * std::clamp(v, 0.0, 1.0) + 0.5);
  return std::uint8_t(scaled);
}

void write_image_pgm(const Imaged& img, const std::filesystem::path& path) {
  if (img.channels() != 1) throw ShapeError("write_image_pgm: expects a single-channel image");
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<char> bytes(header.begin(), header.end());
  bytes.reserve(header.size() + std::size_t(img.size()));
  for (double v : img.values()) bytes.push_back(char(to_pgm_byte(v)));
  write_bytes(path, bytes);
}

Imaged read_image_pgm(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  const std::string where = " in " + path.string();
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&] {
    skip_space();
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
      throw FormatError(FormatError::Kind::kBadHeader, "malformed PGM header" + where);
    }
    long v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) v = v * 10 + (bytes[pos++] - '0');
    return v;
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw FormatError(FormatError::Kind::kBadMagic, "not a binary PGM" + where);
  }
  pos = 2;
  const long w = read_int();
  const long h = read_int();
  const long maxval = read_int();
  if (w < 1 || h < 1 || maxval < 1 || maxval > 255) {
    throw FormatError(FormatError::Kind::kBadHeader, "unsupported PGM dimensions or maxval" + where);
  }
  ++pos;  // single whitespace before raster
  if (bytes.size() < pos + std::size_t(w * h)) throw FormatError(FormatError::Kind::kTruncated, "truncated PGM" + where);
  Imaged img{int(h), int(w)};
  for (Index i = 0; i < img.size(); ++i) img.values()[i] = double(bytes[pos + std::size_t(i)]) / double(maxval);
  return img;
}

}  // namespace voxproj
