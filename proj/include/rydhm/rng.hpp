// Copyright 2026 The rydhm Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

namespace rydhm {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream tags keep geometry and trajectory substreams disjoint.
enum class StreamKind : std::uint64_t { geometry = 1, trajectory = 2 };

/// Seed of the substream (master, realization, trajectory, kind). Results do
/// not depend on the order in which substreams are consumed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t realization,
                                    std::uint64_t trajectory, StreamKind kind) noexcept {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ static_cast<std::uint64_t>(kind));
  h = mix64(h ^ realization);
  h = mix64(h ^ (trajectory + 0x632be59bd9b4e019ULL));
  return h;
}

/// 64-bit Mersenne Twister with portable uniform helpers (the standard
/// distributions are implementation defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n); n > 0. Unbiased via rejection.
  std::size_t index(std::size_t n) noexcept {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rydhm
