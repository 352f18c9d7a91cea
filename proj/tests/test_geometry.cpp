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

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "rydhm/error.hpp"
#include "rydhm/geometry.hpp"
#include "rydhm/rng.hpp"

using namespace rydhm;

namespace {

void check_partition(const PairPartition& part, std::span<const Position> pos) {
  std::vector<int> uses(pos.size(), 0);
  for (const auto& p : part.pairs) {
    const double d = distance(pos[p.first], pos[p.second]);
    REQUIRE(d > part.lower);
    REQUIRE(d <= part.upper);
    REQUIRE(p.first < p.second);
    REQUIRE(p.distance == doctest::Approx(d));
    ++uses[p.first];
    ++uses[p.second];
  }
  for (std::size_t s : part.singles) REQUIRE(uses[s] == 0);
  std::set<std::size_t> singles(part.singles.begin(), part.singles.end());
  REQUIRE(singles.size() == part.singles.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (part.mode == PairingMode::disjoint) REQUIRE(uses[i] <= 1);
    REQUIRE((uses[i] == 0) == (singles.count(i) == 1));
  }
}

std::vector<Position> line(std::initializer_list<double> xs) {
  std::vector<Position> out;
  for (double x : xs) out.push_back({x, 0.0, 0.0});
  return out;
}

std::vector<Position> triangle() {
  return {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0, 0.0}};
}

}  // namespace

TEST_CASE("lattice positions are deterministic") {
  Rng rng(1);
  const auto pos = sample_positions(Geometry::lattice1d(5.0, 3), rng);
  REQUIRE(pos.size() == 3);
  CHECK(pos[0].x == 0.0);
  CHECK(pos[1].x == 5.0);
  CHECK(pos[2].x == 10.0);
}

TEST_CASE("gas samples stay inside their region") {
  Rng rng(7);
  const auto g1 = Geometry::gas1d(50.0, 200);
  for (const auto& p : sample_positions(g1, rng)) {
    CHECK(p.x >= 0.0);
    CHECK(p.x <= 50.0);
    CHECK(p.y == 0.0);
  }
  const auto g3 = Geometry::gas3d({10.0, 20.0, 5.0}, 300);
  for (const auto& p : sample_positions(g3, rng)) {
    CHECK((p.x >= 0.0 && p.x <= 10.0 && p.y >= 0.0 && p.y <= 20.0 && p.z >= 0.0 && p.z <= 5.0));
  }
}

TEST_CASE("density constructors") {
  CHECK(Geometry::gas1d_density(1000.0, 0.1).count == 100);
  CHECK(Geometry::gas1d_density(1000.0 / 3.0, 3.0).count == 1000);
  const auto cube = Geometry::gas3d_cube(500, 2e-3);
  CHECK(cube.count == 500);
  CHECK(cube.density() == doctest::Approx(2e-3));
  CHECK_THROWS_AS(Geometry::gas1d(-1.0, 3).validate(), ValidationError);
  CHECK_THROWS_AS(Geometry::lattice1d(1.0, 0).validate(), ValidationError);
  CHECK_THROWS_AS(Geometry::gas3d({1.0, 0.0, 1.0}, 3).validate(), ValidationError);
  CHECK(geometry_kind_from_string("gas3d") == GeometryKind::gas3d);
  CHECK_THROWS_AS(geometry_kind_from_string("ring"), ValidationError);
}

TEST_CASE("nearest-neighbour scale") {
  Rng rng(3);
  const auto lat = sample_positions(Geometry::lattice1d(5.0, 10), rng);
  CHECK(nearest_neighbor_scale(lat) == doctest::Approx(5.0));
  CHECK(nearest_neighbor_scale(line({0.0, 1.0, 10.0})) == doctest::Approx(1.0));
  CHECK_THROWS_AS(nearest_neighbor_scale(line({1.0})), DegenerateGeometryError);
  CHECK_THROWS_AS(nearest_neighbor_scale(line({1.0, 1.0, 4.0})), DegenerateGeometryError);
}

TEST_CASE("nearest-neighbour scale of a uniform 1D gas") {
  // NN distance of an atom in a Poisson line gas is the minimum of two
  // exponential gaps: Exp(2n), median ln 2 / (2 n).
  const double n = 0.5;
  Rng rng(11);
  double mean = 0.0;
  const int reps = 20;
  for (int k = 0; k < reps; ++k) {
    const auto pos = sample_positions(Geometry::gas1d(20000.0, 10000), rng);
    mean += nearest_neighbor_scale(pos) / reps;
  }
  CHECK(mean == doctest::Approx(std::log(2.0) / (2.0 * n)).epsilon(0.02));
}

TEST_CASE("partition examples") {
  const auto pos = line({0.0, 1.0, 10.0});
  const auto p = build_partition(pos, 0.0, 2.0, PairingMode::disjoint);
  REQUIRE(p.pairs.size() == 1);
  CHECK(p.pairs[0].first == 0);
  CHECK(p.pairs[0].second == 1);
  CHECK(p.singles == std::vector<std::size_t>{2});

  const auto tri = triangle();
  const auto over = build_partition(tri, 0.0, 2.0, PairingMode::overlapping);
  CHECK(over.pairs.size() == 3);
  CHECK(over.singles.empty());
  const auto dis = build_partition(tri, 0.0, 2.0, PairingMode::disjoint);
  REQUIRE(dis.pairs.size() == 1);
  CHECK(dis.pairs[0].first == 0);
  CHECK(dis.pairs[0].second == 1);
  CHECK(dis.singles == std::vector<std::size_t>{2});
}

TEST_CASE("partition bounds and errors") {
  const auto pos = line({0.0, 1.0, 3.0, 3.5});
  // Lower bound excludes the 0.5 pair, so (0, 1) and then nothing else fits.
  const auto p = build_partition(pos, 0.6, 1.5, PairingMode::disjoint);
  REQUIRE(p.pairs.size() == 1);
  CHECK(p.pairs[0].first == 0);
  CHECK(p.singles == std::vector<std::size_t>{2, 3});
  // Upper bound is inclusive.
  CHECK(build_partition(pos, 0.0, 0.5, PairingMode::disjoint).pairs.size() == 1);
  // L_Cr below the minimum spacing gives the rate-equation limit.
  const auto none = build_partition(pos, 0.0, 0.4, PairingMode::disjoint);
  CHECK(none.pairs.empty());
  CHECK(none.singles.size() == 4);
  CHECK_THROWS_AS(build_partition(pos, 1.0, 1.0, PairingMode::disjoint), ValidationError);
  CHECK_THROWS_AS(build_partition(line({0.0, 0.0}), 0.0, 1.0, PairingMode::disjoint),
                  DegenerateGeometryError);
  const auto s = singles_partition(3);
  CHECK(s.pairs.empty());
  CHECK(s.singles == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("partition invariants over random geometries") {
  Rng rng(99);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 2 + rng.index(12);
    const bool three_d = trial % 2 == 0;
    const Geometry g =
        three_d ? Geometry::gas3d({4.0, 4.0, 4.0}, n) : Geometry::gas1d(10.0, n);
    const auto pos = sample_positions(g, rng);
    const double lower = rng.uniform() * 0.5;
    const double upper = lower + 0.1 + rng.uniform() * 3.0;
    const auto mode = trial % 3 == 0 ? PairingMode::overlapping : PairingMode::disjoint;
    check_partition(build_partition(pos, lower, upper, mode), pos);
  }
}

TEST_CASE("disjoint partition follows distance order, not labels") {
  // Relabel atoms while keeping distances: pairs map accordingly.
  const auto pos = line({0.0, 0.9, 2.0, 2.3, 7.0});
  const std::vector<std::size_t> perm{4, 2, 0, 3, 1};
  std::vector<Position> moved(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) moved[perm[i]] = pos[i];
  const auto a = build_partition(pos, 0.0, 1.2, PairingMode::disjoint);
  const auto b = build_partition(moved, 0.0, 1.2, PairingMode::disjoint);
  REQUIRE(a.pairs.size() == b.pairs.size());
  std::set<std::pair<std::size_t, std::size_t>> mapped;
  for (const auto& p : a.pairs) mapped.insert(std::minmax(perm[p.first], perm[p.second]));
  std::set<std::pair<std::size_t, std::size_t>> got;
  for (const auto& p : b.pairs) got.insert({p.first, p.second});
  CHECK(mapped == got);
}

TEST_CASE("pairing mode names") {
  CHECK(pairing_mode_from_string("overlapping") == PairingMode::overlapping);
  CHECK(to_string(PairingMode::disjoint) == "disjoint");
  CHECK_THROWS_AS(pairing_mode_from_string("all"), ValidationError);
}
