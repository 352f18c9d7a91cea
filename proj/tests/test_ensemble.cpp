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
#include "rydhm/ensemble.hpp"
#include "rydhm/error.hpp"
#include "rydhm/liouvillian.hpp"
#include "rydhm/steady.hpp"

using namespace rydhm;

namespace {

EnsembleSpec small_gas() {
  EnsembleSpec spec;
  spec.params.omega12 = 2.0;
  spec.params.omega23 = 1.0;
  spec.params.gamma21 = 6.0;
  spec.params.gamma32 = 0.025;
  spec.params.dephasing21 = 0.1;
  spec.params.dephasing32 = 0.1;
  spec.interaction = InteractionSpec(50.0);
  spec.geometry = Geometry::gas1d(40.0, 24);
  spec.mc = McConfig{10, 2, 21, 3, 1234, false};
  spec.bins = BinSpec::uniform(0.5, 10.0);
  return spec;
}

}  // namespace

TEST_CASE("results do not depend on the worker count") {
  EnsembleSpec spec = small_gas();
  spec.workers = 1;
  const auto one = run_ensemble(spec);
  spec.workers = 4;
  const auto four = run_ensemble(spec);
  spec.workers = 7;
  const auto seven = run_ensemble(spec);
  CHECK(one.observables == four.observables);
  CHECK(one.observables == seven.observables);
  CHECK(one.solves == four.solves);
  CHECK(one.observables.snapshots() == 3 * 21 * 2);
}

TEST_CASE("same seed reproduces, different seed differs") {
  EnsembleSpec spec = small_gas();
  const auto a = run_ensemble(spec);
  const auto b = run_ensemble(spec);
  CHECK(a.observables == b.observables);
  spec.mc.seed = 99;
  const auto c = run_ensemble(spec);
  CHECK_FALSE(a.observables == c.observables);
}

TEST_CASE("partition spec: default bound, explicit bound and SARE") {
  std::vector<Position> pos;
  for (double x : {0.0, 1.0, 2.5, 6.0, 6.4}) pos.push_back({x, 0.0, 0.0});
  PartitionSpec spec;
  const auto def = partition_for(spec, pos);
  CHECK(def.upper == doctest::Approx(nearest_neighbor_scale(pos)));
  spec.upper = 0.3;
  CHECK(partition_for(spec, pos).pairs.empty());
  spec.upper = 2.0;
  spec.sare = true;
  const auto sare = partition_for(spec, pos);
  CHECK(sare.pairs.empty());
  CHECK(sare.singles.size() == 5);
  spec.sare = false;
  spec.lower = 3.0;
  CHECK_THROWS_AS(partition_for(spec, pos), ValidationError);
}

TEST_CASE("uncoupled ensemble matches the single-atom steady state") {
  EnsembleSpec spec = small_gas();
  spec.interaction = InteractionSpec(0.0);
  spec.params.delta = 0.5;
  spec.mc = McConfig{10, 1, 200, 4, 5, true};
  const auto r = run_ensemble(spec);
  const double sigma3 = steady_state(build_single_generator(spec.params, 0.5)).populations[2];
  const Estimate rho = rydberg_fraction(r.observables);
  CHECK(std::abs(rho.value - sigma3) < 3.0 * rho.std_error);
  CHECK(r.mean_pairs > 0.0);
  CHECK(r.memo_hits > 0);
}

TEST_CASE("errors from workers propagate") {
  EnsembleSpec spec = small_gas();
  spec.workers = 3;
  spec.mc.trajectories = 0;
  CHECK_THROWS_AS(run_ensemble(spec), ValidationError);
  spec = small_gas();
  spec.partition.lower = 5.0;
  spec.partition.upper = 1.0;
  spec.workers = 3;
  CHECK_THROWS_AS(run_ensemble(spec), ValidationError);
}
