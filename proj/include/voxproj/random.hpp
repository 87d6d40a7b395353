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

#ifndef VOXPROJ_RANDOM_HPP
#define VOXPROJ_RANDOM_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace voxproj {

/// mt19937_64 with a portable mapping to doubles (std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return std::uint64_t(uniform() * double(bound)) % bound; }

 private:
  std::mt19937_64 engine_;
};

/// Independent seed for a named sub-stream, e.g. stream_seed(seed, "voxelize/chair_01").
inline std::uint64_t stream_seed(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : name) h = (h ^ c) * 0x100000001b3ull;
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(h), std::uint32_t(h >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return std::uint64_t(words[0]) | std::uint64_t(words[1]) << 32;
}

}  // namespace voxproj

#endif  // VOXPROJ_RANDOM_HPP
