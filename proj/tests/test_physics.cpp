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
#include <limits>

#include "doctest.h"
#include "rydhm/error.hpp"
#include "rydhm/physics.hpp"

using namespace rydhm;

TEST_CASE("drive parameters validate rates and finiteness") {
  DriveParams p;
  p.omega12 = 3.0;
  p.gamma21 = 6.0;
  CHECK_NOTHROW(p.validate());
  p.gamma32 = -0.1;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.gamma32 = 0.0;
  p.delta = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.delta = 0.0;
  p.dephasing21 = -1.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("level labels map onto scheme indices") {
  CHECK(level_index(LevelScheme::three_level, kGround) == 0);
  CHECK(level_index(LevelScheme::three_level, kRydberg) == 2);
  CHECK(level_index(LevelScheme::two_level, kRydberg) == 1);
  CHECK_THROWS_AS(level_index(LevelScheme::two_level, kIntermediate), ValidationError);
  CHECK_THROWS_AS(level_index(LevelScheme::three_level, 4), ValidationError);
  for (int l = 0; l < 3; ++l) {
    CHECK(level_index(LevelScheme::three_level, label_of_level(LevelScheme::three_level, l)) == l);
  }
  CHECK(level_scheme_from_string("two_level") == LevelScheme::two_level);
  CHECK_THROWS_AS(level_scheme_from_string("four"), ValidationError);
}

TEST_CASE("van der Waals coupling") {
  const InteractionSpec spec(900.0);
  CHECK(pair_coupling(spec, 2.0) == doctest::Approx(14.0625));
  CHECK(pair_coupling(spec, std::numeric_limits<double>::infinity()) == 0.0);
  CHECK_THROWS_AS(pair_coupling(spec, 0.0), DegenerateGeometryError);
  CHECK_THROWS_AS(pair_coupling(spec, -1.0), DegenerateGeometryError);
  CHECK(pair_coupling(InteractionSpec(0.0), 1.0) == 0.0);
  CHECK(spec.coupling_from_squared(0, 1, 4.0) == doctest::Approx(14.0625));
  CHECK_THROWS_AS((void)spec.coupling_from_squared(0, 1, 0.0), DegenerateGeometryError);
}

TEST_CASE("coupling overrides win over the power law") {
  InteractionSpec spec(900.0);
  spec.set_override(2, 0, 1.5);
  CHECK(spec.has_overrides());
  CHECK(spec.coupling(0, 2, 2.0) == 1.5);
  CHECK(spec.coupling(2, 0, 2.0) == 1.5);
  CHECK(spec.coupling(0, 1, 2.0) == doctest::Approx(14.0625));
  // Overridden pairs may even coincide.
  CHECK(spec.coupling_from_squared(0, 2, 0.0) == 1.5);
  CHECK_THROWS_AS(spec.set_override(1, 1, 1.0), ValidationError);
}

TEST_CASE("resonance distance inverts the power law") {
  const double c6 = 900.0 / (2.0 * 3.141592653589793);
  const double r1 = resonance_distance(c6, 2.0);
  CHECK(pair_coupling(InteractionSpec(c6), r1) == doctest::Approx(2.0));
  CHECK(resonance_distance(c6, 4.0) / r1 == doctest::Approx(std::pow(0.5, 1.0 / 6.0)));
}
