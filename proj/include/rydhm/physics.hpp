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

// Domain types for the driven level scheme and the van der Waals coupling.
//
// Units: frequencies and rates in MHz (hbar = 1, time in microseconds),
// lengths in micrometres. No factors of 2*pi are applied anywhere.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>

namespace rydhm {

enum class LevelScheme { three_level, two_level };

std::string_view to_string(LevelScheme scheme);
LevelScheme level_scheme_from_string(std::string_view name);

/// Laser drive, decay and dephasing of a single atom.
///
/// The Hamiltonian is H = omega12 (S12 + S21) + omega23 (S23 + S32) - delta S33
/// (no factor 1/2 on the Rabi frequencies). For the two-level scheme only
/// omega12, delta, gamma21 and dephasing21 are used; they describe the single
/// ground-Rydberg transition.
struct DriveParams {
  double omega12 = 0.0;
  double omega23 = 0.0;
  double delta = 0.0;
  double gamma21 = 0.0;
  double gamma32 = 0.0;
  double dephasing21 = 0.0;
  double dephasing32 = 0.0;
  LevelScheme scheme = LevelScheme::three_level;

  /// Throws ValidationError on negative rates or non-finite values.
  void validate() const;

  /// Number of internal levels per atom (3 or 2).
  [[nodiscard]] int levels() const noexcept {
    return scheme == LevelScheme::three_level ? 3 : 2;
  }

  friend bool operator==(const DriveParams&, const DriveParams&) = default;
};

/// Atomic level label as used in micro states: 1 ground, 2 intermediate,
/// 3 Rydberg. The two-level scheme uses labels 1 and 3 only.
using Label = std::uint8_t;
inline constexpr Label kGround = 1;
inline constexpr Label kIntermediate = 2;
inline constexpr Label kRydberg = 3;

/// Maps a label onto the internal level index 0..levels-1.
int level_index(LevelScheme scheme, Label label);
/// Inverse of level_index.
Label label_of_level(LevelScheme scheme, int level);

/// Rydberg-Rydberg coupling V(r) = c6 / r^6, with optional explicit values
/// for selected atom pairs (used by synthetic tests and the few-atom oracle).
class InteractionSpec {
 public:
  InteractionSpec() = default;
  explicit InteractionSpec(double c6);

  [[nodiscard]] double c6() const noexcept { return c6_; }

  /// Stores an explicit coupling for the unordered pair {i, j}.
  void set_override(std::size_t i, std::size_t j, double value_mhz);
  [[nodiscard]] bool has_overrides() const noexcept { return !overrides_.empty(); }

  /// Coupling between atoms i and j at distance r. Overrides win; otherwise
  /// c6 / r^6. Throws DegenerateGeometryError for r <= 0 without override.
  [[nodiscard]] double coupling(std::size_t i, std::size_t j, double r) const;

  /// Same as coupling() but from the squared distance, avoiding the sqrt in
  /// hot loops.
  [[nodiscard]] double coupling_from_squared(std::size_t i, std::size_t j,
                                             double r2) const;

 private:
  double c6_ = 0.0;
  std::map<std::pair<std::size_t, std::size_t>, double> overrides_;
};

/// V(r) = c6 / r^6. Throws DegenerateGeometryError for r <= 0.
double pair_coupling(const InteractionSpec& spec, double r);

/// Explicit-override aware variant for a specific atom pair.
double pair_coupling(const InteractionSpec& spec, std::size_t i, std::size_t j,
                     double r);

/// Distance at which c6 / r^6 equals the given energy.
double resonance_distance(double c6, double energy_mhz);

}  // namespace rydhm
