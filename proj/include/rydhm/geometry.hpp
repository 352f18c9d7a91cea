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

// Atom positions, nearest-neighbour scale and the pair/single partition.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "rydhm/rng.hpp"

namespace rydhm {

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline double squared_distance(const Position& a, const Position& b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

double distance(const Position& a, const Position& b) noexcept;

enum class GeometryKind { lattice1d, gas1d, gas3d };

std::string_view to_string(GeometryKind kind);
GeometryKind geometry_kind_from_string(std::string_view name);

/// Sample region. Lattices are deterministic (k * a along x); gases are
/// uniform in [0, L] (1D) or in an axis-aligned box (3D).
struct Geometry {
  GeometryKind kind = GeometryKind::gas1d;
  std::size_t count = 1;
  double lattice_constant = 0.0;        // lattice1d
  std::array<double, 3> extent{0, 0, 0};  // gas1d: extent[0] = L; gas3d: box

  static Geometry lattice1d(double a, std::size_t n);
  static Geometry gas1d(double length, std::size_t n);
  /// n = round(density * length).
  static Geometry gas1d_density(double length, double density);
  static Geometry gas3d(std::array<double, 3> box, std::size_t n);
  /// Cube holding n atoms at the given density.
  static Geometry gas3d_cube(std::size_t n, double density);

  void validate() const;
  /// Atoms per unit length (1D) or volume (3D).
  [[nodiscard]] double density() const;
};

std::vector<Position> sample_positions(const Geometry& geometry, Rng& rng);

/// Median over atoms of the nearest-neighbour distance.
double nearest_neighbor_scale(std::span<const Position> positions);

enum class PairingMode { disjoint, overlapping };

std::string_view to_string(PairingMode mode);
PairingMode pairing_mode_from_string(std::string_view name);

struct AtomPair {
  std::size_t first = 0;
  std::size_t second = 0;
  double distance = 0.0;
};

struct PairPartition {
  std::vector<AtomPair> pairs;
  std::vector<std::size_t> singles;
  PairingMode mode = PairingMode::disjoint;
  double lower = 0.0;
  double upper = 0.0;

  [[nodiscard]] std::size_t unit_count() const noexcept {
    return pairs.size() + singles.size();
  }
};

/// Candidate pairs have lower < d <= upper. Disjoint mode accepts candidates
/// greedily in ascending distance (ties: lowest index pair first) when both
/// atoms are still unpaired; overlapping mode keeps every candidate.
PairPartition build_partition(std::span<const Position> positions, double lower,
                              double upper, PairingMode mode);

/// Every atom a single unit (rate-equation limit).
PairPartition singles_partition(std::size_t atoms);

}  // namespace rydhm
