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

#ifndef VOXPROJ_IO_HPP
#define VOXPROJ_IO_HPP

#include <cstdint>
#include <filesystem>

#include "voxproj/grid.hpp"

namespace voxproj {

// VOXG layout (all integers little-endian):
//   "VOXG" | version u8 = 1 | channels u8 | n u16 | channels*n^3 float32 in VoxelGrid order
inline constexpr std::uint8_t kVoxgVersion = 1;
inline constexpr std::size_t kVoxgHeaderSize = 8;

void write_grid(const VoxelGridf& grid, const std::filesystem::path& path);
VoxelGridf read_grid(const std::filesystem::path& path);

/// Binary P5 with maxval 255; byte = floor(255*v + 0.5). Multi-channel images are rejected.
void write_image_pgm(const Imaged& img, const std::filesystem::path& path);
Imaged read_image_pgm(const std::filesystem::path& path);

/// Quantization used by write_image_pgm.
std::uint8_t to_pgm_byte(double v);

}  // namespace voxproj

#endif  // VOXPROJ_IO_HPP
