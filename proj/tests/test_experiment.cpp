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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rydhm/error.hpp"
#include "rydhm/experiment.hpp"

using namespace rydhm;

namespace {

std::string body(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    out += line + "\n";
  }
  return out;
}

const char* kSmall = R"({
  "name": "small",
  "physics": {"omega12": 2, "omega23": 1, "gamma21": 6, "gamma32": 0.025,
              "dephasing21": 0.1, "dephasing32": 0.1, "c6": 50},
  "geometry": {"kind": "gas1d", "length": 30, "count": 12},
  "mc": {"trajectories": 4, "realizations": 2, "seed": 7},
  "scan": {"kind": "detuning", "detunings": {"start": -1, "stop": 1, "step": 0.5}},
  "output": {"bin_width": 0.5, "r_max": 5}
})";

}  // namespace

TEST_CASE("every preset validates and round-trips through JSON") {
  for (const auto& name : preset_names()) {
    const auto c = preset(name);
    CHECK(c.name == name);
    const auto back = ExperimentConfig::from_json(c.to_json());
    CHECK(back.to_json() == c.to_json());
  }
  CHECK_THROWS_AS(preset("fig99"), ValidationError);
}

TEST_CASE("preset contents follow the figure captions") {
  const auto a = preset("fig4a");
  CHECK(a.params.omega12 == 2.0);
  CHECK(a.params.omega23 == 1.0);
  CHECK(a.params.gamma21 == 6.0);
  CHECK(a.params.gamma32 == 0.025);
  CHECK(a.params.dephasing21 == 0.1);
  CHECK(a.c6 == 50000.0);
  CHECK(a.geometry.count == 500);
  CHECK(a.geometry.kind == GeometryKind::gas3d);
  CHECK(a.scan.kind == ScanKind::density);
  const auto b = preset("fig4b");
  CHECK(b.resolved_c6() == doctest::Approx(2.5 * std::pow(5.0, 6)));
  CHECK(b.partition.mode == PairingMode::overlapping);
  const auto q = preset("fig6");
  CHECK(q.geometry.count == 50);
  CHECK(q.resolved_c6() / std::pow(q.geometry.lattice_constant, 6) == doctest::Approx(100.0));
  CHECK(q.scan.kind == ScanKind::mandel_q);
  const auto g = preset("fig5");
  CHECK(g.c6 == doctest::Approx(900.0 / (2.0 * 3.141592653589793)));
  CHECK(g.geometry.count == 100);
  CHECK(g.geometry.density() == doctest::Approx(0.1));
  const auto seven = preset("fig7");
  CHECK(seven.params.scheme == LevelScheme::two_level);
  CHECK(seven.geometry.density() == doctest::Approx(3.0));
  CHECK(seven.notes.find("ASSUMPTION") != std::string::npos);
  CHECK(preset("fig2").scan.couplings.size() == 30);
}

TEST_CASE("config parsing diagnostics") {
  CHECK_NOTHROW(ExperimentConfig::from_json(kSmall));
  const auto c = ExperimentConfig::from_json(kSmall);
  CHECK(c.scan.detunings == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK(c.partition.mode == PairingMode::disjoint);

  try {
    (void)ExperimentConfig::from_json("{\n  \"name\": \"x\",\n  oops\n}", "bad.json");
    FAIL("expected a parse error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("bad.json:3:") != std::string::npos);
  }
  std::string unknown = kSmall;
  unknown.replace(unknown.find("\"seed\""), 6, "\"sede\"");
  try {
    (void)ExperimentConfig::from_json(unknown);
    FAIL("expected an unknown-key error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("mc.sede") != std::string::npos);
  }
  std::string wrong_type = kSmall;
  wrong_type.replace(wrong_type.find("\"c6\": 50"), 8, "\"c6\": \"x\"");
  try {
    (void)ExperimentConfig::from_json(wrong_type);
    FAIL("expected a type error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("physics.c6") != std::string::npos);
  }
  CHECK_THROWS_AS(ExperimentConfig::from_file("/nonexistent/config.json"), ValidationError);
}

TEST_CASE("high-density bounds must sandwich R2") {
  auto c = preset("fig7");
  // R2 = (900 / 14)^(1/6) = 2.0.
  CHECK_NOTHROW(c.validate());
  c.partition.upper = 1.95;
  try {
    c.validate();
    FAIL("expected a sandwich violation");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("R2") != std::string::npos);
  }
  c.partition.upper = 2.2;
  c.partition.lower = 2.05;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.partition.lower = 1.8;
  c.scan.detunings = {7.0, -1.0};
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("overrides take precedence") {
  auto c = ExperimentConfig::from_json(kSmall);
  Overrides o;
  o.seed = 42;
  o.trajectories = 9;
  o.workers = 3;
  o.l_upper = 2.0;
  o.sare = true;
  o.memoize = true;
  apply_overrides(c, o);
  CHECK(c.mc.seed == 42);
  CHECK(c.mc.trajectories == 9);
  CHECK(c.workers == 3);
  CHECK(*c.partition.upper == 2.0);
  CHECK(c.partition.sare);
  CHECK(c.mc.memoize);
  Overrides bad;
  bad.l_lower = 5.0;
  CHECK_THROWS_AS(apply_overrides(c, bad), ValidationError);
}

TEST_CASE("runs are reproducible and independent of workers") {
  auto c = ExperimentConfig::from_json(kSmall);
  const auto a = run_experiment(c);
  c.workers = 3;
  const auto b = run_experiment(c);
  REQUIRE(a.size() == 1);
  CHECK(a[0].name == "small_rho33.csv");
  CHECK(body(a[0].contents) == body(b[0].contents));
  const std::string text = a[0].contents;
  CHECK(text.rfind("# rydhm ", 0) == 0);
  CHECK(text.find("# seed: 7") != std::string::npos);
  CHECK(text.find("# config: {") != std::string::npos);
  CHECK(body(text).rfind("delta,rho33,stderr,mean_pairs\n", 0) == 0);
  // The embedded config re-creates the run.
  const auto pos = text.find("# config: ");
  const auto end = text.find('\n', pos);
  const auto again = ExperimentConfig::from_json(text.substr(pos + 10, end - pos - 10));
  CHECK(body(run_experiment(again)[0].contents) == body(text));
}

TEST_CASE("every scan kind writes its table") {
  auto c = ExperimentConfig::from_json(kSmall);
  c.dump_positions = true;
  for (auto kind : {ScanKind::g2, ScanKind::pair_probability, ScanKind::mandel_q,
                    ScanKind::density}) {
    c.scan.kind = kind;
    c.scan.densities = {0.3, 0.5};
    const auto files = run_experiment(c);
    CHECK(files.front().name == "small_positions.csv");
    CHECK(files.size() >= 2);
    const std::string b = body(files[1].contents);
    switch (kind) {
      case ScanKind::g2:
        CHECK(b.rfind("delta,r_bin_center,g2,stderr,pair_count\n", 0) == 0);
        break;
      case ScanKind::pair_probability:
        CHECK(b.rfind("delta,r_bin_center,probability,stderr,pair_count,rho33_squared\n", 0) == 0);
        break;
      case ScanKind::mandel_q:
        CHECK(b.rfind("delta,q,stderr,rho33\n", 0) == 0);
        break;
      default:
        CHECK(files.size() == 3);
        CHECK(b.rfind("density,delta,rho33,stderr,mean_pairs\n", 0) == 0);
    }
  }
  ExperimentConfig d = preset("fig2");
  d.scan.detunings = {0.0};
  d.scan.couplings = {0.01, 10.0};
  const auto dev = run_experiment(d);
  REQUIRE(dev.size() == 1);
  CHECK(body(dev[0].contents).rfind("delta,v,dev_a,dev_b,dev_c\n", 0) == 0);
}

TEST_CASE("outputs are written to disk") {
  const auto dir = std::filesystem::temp_directory_path() / "rydhm_test_outputs" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_outputs(dir.string(), {{"a.csv", "x\n"}, {"b.csv", "y\n"}});
  std::ifstream in(dir / "b.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "y");
  std::filesystem::remove_all(dir.parent_path());
}
