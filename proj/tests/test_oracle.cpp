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

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rydhm/error.hpp"
#include "rydhm/liouvillian.hpp"
#include "rydhm/oracle.hpp"
#include "rydhm/steady.hpp"

using namespace rydhm;

namespace {

DriveParams fig2_params(double delta = 0.0) {
  DriveParams p;
  p.omega12 = 3.0;
  p.omega23 = 2.0;
  p.gamma21 = 6.0;
  p.gamma32 = 0.025;
  p.delta = delta;
  return p;
}

}  // namespace

TEST_CASE("two-atom exact state equals the pair generator state") {
  const std::vector<double> c{0.0, 2.0, 2.0, 0.0};
  const auto exact = exact_steady_state(fig2_params(0.5), c, 2);
  const auto pair = steady_state(build_pair_generator(fig2_params(), 0.5, 0.5, 2.0)).populations;
  CHECK(testing::max_abs_diff(exact.joint, pair) < 1e-10);
  const std::vector<double> zero(4, 0.0);
  const auto free = exact_steady_state(fig2_params(0.5), zero, 2);
  const auto s = steady_state(build_single_generator(fig2_params(), 0.5)).populations;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK(std::abs(free.joint[3 * a + b] - s[a] * s[b]) < 1e-10);
  CHECK(free.per_atom_rydberg[0] == doctest::Approx(s[2]));
}

TEST_CASE("three-atom blockade limit") {
  // Strong couplings: the weight of >= 2 excitations falls with V.
  double previous = 1.0;
  for (double v : {1e2, 1e4, 1e6}) {
    const std::vector<double> c{0.0, v, v, v, 0.0, v, v, v, 0.0};
    const double multi = exact_steady_state(fig2_params(), c, 3).probability_at_least_rydberg(2);
    CHECK(multi < previous);
    previous = multi;
  }
  CHECK(previous < 1e-4);
}

TEST_CASE("three-atom exact state agrees with long-time integration") {
  const auto c = three_atom_couplings(2.0, 1.0);
  const auto m = build_exact_generator(fig2_params(), c, 3);
  const auto solved = exact_steady_state(fig2_params(), c, 3);
  const auto integrated = testing::long_time_populations(m, 0.02, 28);
  CHECK(testing::max_abs_diff(solved.joint, integrated) < 1e-8);
}

TEST_CASE("four atoms are supported, five are not") {
  const std::vector<double> c4(16, 0.5);
  std::vector<double> sym = c4;
  for (int i = 0; i < 4; ++i) sym[5 * i] = 0.0;
  DriveParams p = fig2_params();
  p.scheme = LevelScheme::two_level;
  p.omega12 = 1.0;
  const auto d = exact_steady_state(p, sym, 4);
  CHECK(d.joint.size() == 16);
  double sum = 0.0;
  for (double x : d.joint) sum += x;
  CHECK(sum == doctest::Approx(1.0));
  CHECK_THROWS_AS(exact_steady_state(p, std::vector<double>(25, 0.0), 5), SizeLimitError);
}

TEST_CASE("chain evaluation of a single pair is exact") {
  // One pair unit and nothing else: the chain resamples from the pair state.
  const std::vector<double> c{0.0, 2.0, 2.0, 0.0};
  PairPartition part;
  part.pairs = {{0, 1, 1.0}};
  const auto chain = chain_steady_state(fig2_params(), c, 2, part);
  const auto exact = exact_steady_state(fig2_params(), c, 2);
  CHECK(testing::max_abs_diff(chain.joint, exact.joint) < 1e-10);
}

TEST_CASE("pair plus decoupled single is exact") {
  const auto c = three_atom_couplings(2.0, 0.0);
  const auto chain = chain_steady_state(fig2_params(0.7), c, 3,
                                        three_atom_partition(ThreeAtomModel::pair_plus_single));
  const auto exact = exact_steady_state(fig2_params(0.7), c, 3);
  CHECK(std::abs(chain.rydberg_fraction() - exact.rydberg_fraction()) < 1e-10);
}

TEST_CASE("chain and Monte Carlo evaluations agree") {
  const auto c = three_atom_couplings(2.0, 1.5);
  for (auto model : {ThreeAtomModel::singles, ThreeAtomModel::overlapping_pairs,
                     ThreeAtomModel::pair_plus_single}) {
    const auto part = three_atom_partition(model);
    const auto chain = chain_steady_state(fig2_params(), c, 3, part);
    const McConfig mc{10, 1, 40000, 1, 3, true};
    const auto mcd = sampled_steady_state(fig2_params(), c, 3, part, mc);
    // Per-trajectory fraction has variance at most rho (1 - rho).
    const double rho = chain.rydberg_fraction();
    const double se = std::sqrt(rho * (1 - rho) / 40000.0);
    CHECK(std::abs(mcd.rydberg_fraction() - rho) < 4.0 * se);
  }
}

TEST_CASE("three-atom model partitions") {
  CHECK(three_atom_partition(ThreeAtomModel::singles).singles.size() == 3);
  CHECK(three_atom_partition(ThreeAtomModel::overlapping_pairs).pairs.size() == 3);
  const auto c = three_atom_partition(ThreeAtomModel::pair_plus_single);
  CHECK(c.pairs.size() == 1);
  CHECK(c.singles == std::vector<std::size_t>{2});
  const auto v = three_atom_couplings(2.0, 0.3);
  CHECK(v[1] == 2.0);
  CHECK(v[2] == 0.3);
  CHECK(v[5] == 0.3);
  CHECK(v[7] == 0.3);
  CHECK(to_string(ThreeAtomModel::overlapping_pairs) == "overlapping_pairs");
}

TEST_CASE("deviation map structure") {
  const auto grid = default_coupling_grid();
  REQUIRE(grid.size() == 30);
  CHECK(grid.front() == doctest::Approx(1e-2));
  CHECK(grid.back() == doctest::Approx(10.0));
  const std::vector<double> deltas{-2.0, 0.0, 2.0};
  const auto map = deviation_map(fig2_params(), deltas, grid);
  CHECK(map.points.size() == 90);
  for (const auto& p : map.points) {
    for (double d : p.deviation) CHECK(d >= 0.0);
  }
  // Delta = 0 row.
  std::vector<DeviationPoint> row;
  for (const auto& p : map.points)
    if (p.delta == 0.0) row.push_back(p);
  CHECK(row.front().deviation[2] < 1e-2);
  CHECK(row.back().deviation[1] < row.back().deviation[2]);
  CHECK(DeviationMap::best_model(row.front()) == ThreeAtomModel::pair_plus_single);
  CHECK(DeviationMap::best_model(row.back()) == ThreeAtomModel::overlapping_pairs);
}

TEST_CASE("chain evaluation size limits") {
  PairPartition part = singles_partition(7);
  CHECK_THROWS_AS(chain_steady_state(fig2_params(), std::vector<double>(49, 0.0), 7, part),
                  SizeLimitError);
  CHECK_THROWS_AS(chain_steady_state(fig2_params(), std::vector<double>(4, 0.0), 2, PairPartition{}),
                  ValidationError);
}
