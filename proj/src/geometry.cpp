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

#include "rydhm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rydhm/error.hpp"

namespace rydhm {

double distance(const Position& a, const Position& b) noexcept {
  return std::sqrt(squared_distance(a, b));
}

std::string_view to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::lattice1d:
      return "lattice1d";
    case GeometryKind::gas1d:
      return "gas1d";
    case GeometryKind::gas3d:
      return "gas3d";
  }
  return "?";
}

GeometryKind geometry_kind_from_string(std::string_view name) {
  if (name == "lattice1d") return GeometryKind::lattice1d;
  if (name == "gas1d") return GeometryKind::gas1d;
  if (name == "gas3d") return GeometryKind::gas3d;
  throw ValidationError("unknown geometry kind '" + std::string(name) + "'");
}

Geometry Geometry::lattice1d(double a, std::size_t n) {
  Geometry g;
  g.kind = GeometryKind::lattice1d;
  g.lattice_constant = a;
  g.count = n;
  g.validate();
  return g;
}

Geometry Geometry::gas1d(double length, std::size_t n) {
  Geometry g;
  g.kind = GeometryKind::gas1d;
  g.extent = {length, 0.0, 0.0};
  g.count = n;
  g.validate();
  return g;
}

Geometry Geometry::gas1d_density(double length, double density) {
  if (!(density > 0.0) || !(length > 0.0)) {
    throw ValidationError("gas1d needs positive length and density");
  }
  return gas1d(length, static_cast<std::size_t>(std::llround(density * length)));
}

Geometry Geometry::gas3d(std::array<double, 3> box, std::size_t n) {
  Geometry g;
  g.kind = GeometryKind::gas3d;
  g.extent = box;
  g.count = n;
  g.validate();
  return g;
}

Geometry Geometry::gas3d_cube(std::size_t n, double density) {
  if (!(density > 0.0)) throw ValidationError("gas3d density must be positive");
  const double side = std::cbrt(static_cast<double>(n) / density);
  return gas3d({side, side, side}, n);
}

void Geometry::validate() const {
  if (count < 1) throw ValidationError("geometry needs at least one atom");
  switch (kind) {
    case GeometryKind::lattice1d:
      if (!(lattice_constant > 0.0)) throw ValidationError("lattice constant must be positive");
      break;
    case GeometryKind::gas1d:
      if (!(extent[0] > 0.0)) throw ValidationError("gas1d length must be positive");
      break;
    case GeometryKind::gas3d:
      for (double e : extent) {
        if (!(e > 0.0)) throw ValidationError("gas3d box dimensions must be positive");
      }
      break;
  }
}

double Geometry::density() const {
  switch (kind) {
    case GeometryKind::lattice1d:
      return 1.0 / lattice_constant;
    case GeometryKind::gas1d:
      return static_cast<double>(count) / extent[0];
    case GeometryKind::gas3d:
      return static_cast<double>(count) / (extent[0] * extent[1] * extent[2]);
  }
  return 0.0;
}

std::vector<Position> sample_positions(const Geometry& geometry, Rng& rng) {
  geometry.validate();
  std::vector<Position> out(geometry.count);
  switch (geometry.kind) {
    case GeometryKind::lattice1d:
      for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].x = static_cast<double>(k) * geometry.lattice_constant;
      }
      break;
    case GeometryKind::gas1d:
      for (auto& p : out) p.x = rng.uniform() * geometry.extent[0];
      break;
    case GeometryKind::gas3d:
      for (auto& p : out) {
        p.x = rng.uniform() * geometry.extent[0];
        p.y = rng.uniform() * geometry.extent[1];
        p.z = rng.uniform() * geometry.extent[2];
      }
      break;
  }
  return out;
}

double nearest_neighbor_scale(std::span<const Position> positions) {
  const std::size_t n = positions.size();
  if (n < 2) {
    throw DegenerateGeometryError("nearest-neighbour scale needs at least two atoms");
  }
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d2 = squared_distance(positions[i], positions[j]);
      nearest[i] = std::min(nearest[i], d2);
      nearest[j] = std::min(nearest[j], d2);
    }
  }
  std::sort(nearest.begin(), nearest.end());
  if (nearest.front() == 0.0) throw DegenerateGeometryError("two atoms at identical positions");
  const double median = (n % 2 == 1)
                            ? std::sqrt(nearest[n / 2])
                            : 0.5 * (std::sqrt(nearest[n / 2 - 1]) + std::sqrt(nearest[n / 2]));
  return median;
}

std::string_view to_string(PairingMode mode) {
  return mode == PairingMode::disjoint ? "disjoint" : "overlapping";
}

PairingMode pairing_mode_from_string(std::string_view name) {
  if (name == "disjoint") return PairingMode::disjoint;
  if (name == "overlapping") return PairingMode::overlapping;
  throw ValidationError("unknown pairing mode '" + std::string(name) + "'");
}

PairPartition build_partition(std::span<const Position> positions, double lower,
                              double upper, PairingMode mode) {
  if (!(lower >= 0.0) || !(lower < upper)) {
    throw ValidationError("partition bounds need 0 <= lower < upper");
  }
  const std::size_t n = positions.size();
  struct Candidate {
    long long key;  // distance quantized to 1e-9 um so near-ties use the index order
    AtomPair pair;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(positions[i], positions[j]);
      if (d == 0.0) {
        throw DegenerateGeometryError("atoms " + std::to_string(i) + " and " +
                                      std::to_string(j) + " are at identical positions");
      }
      if (d > lower && d <= upper) {
        candidates.push_back({std::llround(d * 1e9), {i, j, d}});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.key != b.key) return a.key < b.key;
    if (a.pair.first != b.pair.first) return a.pair.first < b.pair.first;
    return a.pair.second < b.pair.second;
  });

  PairPartition out;
  out.mode = mode;
  out.lower = lower;
  out.upper = upper;
  std::vector<char> paired(n, 0);
  for (const auto& c : candidates) {
    if (mode == PairingMode::disjoint && (paired[c.pair.first] || paired[c.pair.second])) {
      continue;
    }
    paired[c.pair.first] = 1;
    paired[c.pair.second] = 1;
    out.pairs.push_back(c.pair);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!paired[i]) out.singles.push_back(i);
  }
  return out;
}

PairPartition singles_partition(std::size_t atoms) {
  PairPartition out;
  out.singles.resize(atoms);
  for (std::size_t i = 0; i < atoms; ++i) out.singles[i] = i;
  return out;
}

}  // namespace rydhm
