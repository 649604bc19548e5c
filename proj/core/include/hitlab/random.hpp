// Copyright 2026 The hitlab Authors.
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

#ifndef HITLAB_RANDOM_HPP_
#define HITLAB_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace hitlab {

/// One step of the splitmix64 output function. Used for seed derivation only;
/// sample streams come from std::mt19937_64.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based derivation of an independent stream seed. The result depends
/// only on (master, stream, index), so the work item `index` sees the same
/// random numbers regardless of which thread runs it.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index) noexcept {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
  return splitmix64(s ^ index);
}

// Stream tags keep pipelines that share a master seed decorrelated.
namespace streams {
inline constexpr std::uint64_t kBlocks = 1;
inline constexpr std::uint64_t kHitting = 2;
inline constexpr std::uint64_t kReturns = 3;
inline constexpr std::uint64_t kProcesses = 4;
inline constexpr std::uint64_t kPairTable = 5;
inline constexpr std::uint64_t kD3 = 6;
inline constexpr std::uint64_t kMixing = 7;
inline constexpr std::uint64_t kHistogram = 8;
inline constexpr std::uint64_t kExpansivity = 9;
inline constexpr std::uint64_t kDuality = 10;
inline constexpr std::uint64_t kCorrelation = 11;
}  // namespace streams

using Engine = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits. Bit-portable, unlike
/// std::uniform_real_distribution.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1]; safe to pass to log().
inline double uniform01_open_low(Engine& engine) {
  return (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace hitlab

#endif  // HITLAB_RANDOM_HPP_
