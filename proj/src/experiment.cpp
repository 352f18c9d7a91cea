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

#include "rydhm/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rydhm/error.hpp"
#include "rydhm/observables.hpp"
#include "rydhm/rng.hpp"

#ifndef RYDHM_VERSION
#define RYDHM_VERSION "dev"
#endif

namespace rydhm {

using nlohmann::json;

std::string_view to_string(ScanKind kind) {
  switch (kind) {
    case ScanKind::detuning:
      return "detuning";
    case ScanKind::density:
      return "density";
    case ScanKind::g2:
      return "g2";
    case ScanKind::mandel_q:
      return "mandel_q";
    case ScanKind::pair_probability:
      return "pair_probability";
    case ScanKind::deviation_map:
      return "deviation_map";
  }
  return "?";
}

ScanKind scan_kind_from_string(std::string_view name) {
  for (ScanKind k : {ScanKind::detuning, ScanKind::density, ScanKind::g2, ScanKind::mandel_q,
                     ScanKind::pair_probability, ScanKind::deviation_map}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown scan kind '" + std::string(name) + "'");
}

double ExperimentConfig::resolved_c6() const {
  if (lattice_vnn) return *lattice_vnn * std::pow(geometry.lattice_constant, 6);
  return c6;
}

BinSpec ExperimentConfig::bins() const {
  if (geometry.kind == GeometryKind::lattice1d) {
    const double a = geometry.lattice_constant;
    std::size_t orders = geometry.count > 1 ? geometry.count - 1 : 1;
    if (r_max) orders = std::max<std::size_t>(1, static_cast<std::size_t>(*r_max / a + 1e-9));
    return BinSpec::lattice(a, orders);
  }
  return BinSpec::uniform(bin_width, r_max.value_or(20.0));
}

void ExperimentConfig::validate() const {
  params.validate();
  geometry.validate();
  mc.validate();
  if (!std::isfinite(c6)) throw ValidationError("physics.c6 must be finite");
  if (lattice_vnn && geometry.kind != GeometryKind::lattice1d) {
    throw ValidationError("physics.lattice_vnn requires a lattice1d geometry");
  }
  if (!(bin_width > 0.0)) throw ValidationError("output.bin_width must be positive");
  if (r_max && !(*r_max > 0.0)) throw ValidationError("output.r_max must be positive");
  if (workers < 1) throw ValidationError("mc.workers must be >= 1");
  if (partition.lower < 0.0) throw ValidationError("partition.lower must be >= 0");
  if (partition.upper && !(*partition.upper > partition.lower)) {
    throw ValidationError("partition.upper must exceed partition.lower");
  }
  if (scan.detunings.empty()) throw ValidationError("scan.detunings must not be empty");
  for (double d : scan.detunings) {
    if (!std::isfinite(d)) throw ValidationError("scan.detunings must be finite");
  }
  if (scan.kind == ScanKind::density) {
    if (scan.densities.empty()) throw ValidationError("scan.densities must not be empty");
    if (geometry.kind == GeometryKind::lattice1d) {
      throw ValidationError("scan.densities requires a gas geometry");
    }
    for (double n : scan.densities) {
      if (!(n > 0.0)) throw ValidationError("scan.densities must be positive");
    }
  }
  if (scan.kind == ScanKind::deviation_map) {
    if (scan.couplings.empty()) throw ValidationError("scan.couplings must not be empty");
    if (!std::isfinite(scan.v12)) throw ValidationError("scan.v12 must be finite");
  }
  (void)bins();
  if (high_density) {
    if (!partition.upper) {
      throw ValidationError("high-density pairing needs an explicit partition.upper");
    }
    const double c = resolved_c6();
    for (double d : scan.detunings) {
      if (!(d > 0.0) || !(c > 0.0)) {
        throw ValidationError(
            "high-density pairing needs positive detunings and c6 to define R2");
      }
      const double r2 = resolved_c6() > 0 ? std::pow(c / (2.0 * d), 1.0 / 6.0) : 0.0;
      if (!(partition.lower < r2 && r2 < *partition.upper)) {
        std::ostringstream msg;
        msg << "high-density pairing requires L_lower < R2 < L_upper with "
               "R2 = (c6 / (2 delta))^(1/6); got L_lower = "
            << partition.lower << " um, R2 = " << r2 << " um, L_upper = " << *partition.upper
            << " um at delta = " << d << " MHz";
        throw ValidationError(msg.str());
      }
    }
  }
}

namespace {

// ---- JSON helpers -------------------------------------------------------

std::string path_join(std::string_view parent, std::string_view key) {
  return parent.empty() ? std::string(key) : std::string(parent) + "." + std::string(key);
}

void check_keys(const json& obj, std::string_view path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ValidationError("config field " + std::string(path) + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) {
      throw ValidationError("config field " + path_join(path, key) + ": unknown key");
    }
  }
}

double get_number(const json& obj, std::string_view path, const char* key, double fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ValidationError("config field " + path_join(path, key) + ": expected a number");
  }
  return v.get<double>();
}

std::optional<double> get_optional_number(const json& obj, std::string_view path, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return get_number(obj, path, key, 0.0);
}

std::uint64_t get_count(const json& obj, std::string_view path, const char* key,
                        std::uint64_t fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ValidationError("config field " + path_join(path, key) +
                          ": expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

bool get_bool(const json& obj, std::string_view path, const char* key, bool fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) {
    throw ValidationError("config field " + path_join(path, key) + ": expected true or false");
  }
  return v.get<bool>();
}

std::string get_string(const json& obj, std::string_view path, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) {
    throw ValidationError("config field " + path_join(path, key) + ": expected a string");
  }
  return v.get<std::string>();
}

std::vector<double> get_grid(const json& obj, std::string_view path, const char* key,
                             const std::vector<double>& fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  const json& v = obj.at(key);
  const std::string field = path_join(path, key);
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw ValidationError("config field " + field + ": expected numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  if (v.is_object()) {
    check_keys(v, field, {"start", "stop", "step"});
    const double start = get_number(v, field, "start", 0.0);
    const double stop = get_number(v, field, "stop", 0.0);
    const double step = get_number(v, field, "step", 0.0);
    if (!(step > 0.0) || stop < start) {
      throw ValidationError("config field " + field + ": need step > 0 and stop >= start");
    }
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = start + static_cast<double>(k) * step;
    return out;
  }
  throw ValidationError("config field " + field + ": expected a list or {start, stop, step}");
}

json geometry_to_json(const Geometry& g) {
  json j;
  j["kind"] = std::string(to_string(g.kind));
  j["count"] = g.count;
  switch (g.kind) {
    case GeometryKind::lattice1d:
      j["lattice_constant"] = g.lattice_constant;
      break;
    case GeometryKind::gas1d:
      j["length"] = g.extent[0];
      break;
    case GeometryKind::gas3d:
      j["box"] = {g.extent[0], g.extent[1], g.extent[2]};
      break;
  }
  return j;
}

Geometry geometry_from_json(const json& j) {
  const std::string path = "geometry";
  check_keys(j, path, {"kind", "count", "lattice_constant", "length", "box", "density"});
  const GeometryKind kind = geometry_kind_from_string(get_string(j, path, "kind", "gas1d"));
  const auto density = get_optional_number(j, path, "density");
  const bool has_count = j.contains("count") && !j.at("count").is_null();
  switch (kind) {
    case GeometryKind::lattice1d:
      return Geometry::lattice1d(get_number(j, path, "lattice_constant", 0.0),
                                 get_count(j, path, "count", 0));
    case GeometryKind::gas1d: {
      const auto length = get_optional_number(j, path, "length");
      if (length && has_count) return Geometry::gas1d(*length, get_count(j, path, "count", 0));
      if (length && density) return Geometry::gas1d_density(*length, *density);
      if (has_count && density) {
        const auto n = get_count(j, path, "count", 0);
        return Geometry::gas1d(static_cast<double>(n) / *density, n);
      }
      throw ValidationError("config field geometry: gas1d needs two of length, count, density");
    }
    case GeometryKind::gas3d: {
      if (j.contains("box")) {
        const json& b = j.at("box");
        if (!b.is_array() || b.size() != 3) {
          throw ValidationError("config field geometry.box: expected three numbers");
        }
        std::array<double, 3> box{};
        for (int k = 0; k < 3; ++k) {
          if (!b[k].is_number()) throw ValidationError("config field geometry.box: expected numbers");
          box[k] = b[k].get<double>();
        }
        if (has_count) return Geometry::gas3d(box, get_count(j, path, "count", 0));
        if (density) {
          return Geometry::gas3d(
              box, static_cast<std::size_t>(std::llround(*density * box[0] * box[1] * box[2])));
        }
        throw ValidationError("config field geometry: gas3d box needs count or density");
      }
      if (has_count && density) return Geometry::gas3d_cube(get_count(j, path, "count", 0), *density);
      throw ValidationError("config field geometry: gas3d needs box or count and density");
    }
  }
  throw ValidationError("config field geometry.kind: unsupported");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string header(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "# rydhm " << RYDHM_VERSION << "\n";
  out << "# experiment: " << config.name << "\n";
  out << "# scan: " << to_string(config.scan.kind) << "\n";
  out << "# seed: " << config.mc.seed << "\n";
  if (!config.notes.empty()) out << "# notes: " << config.notes << "\n";
  if (config.mc.samples_per_trajectory > 1) {
    out << "# snapshots: " << config.mc.samples_per_trajectory
        << " correlated snapshots per trajectory; standard errors treat them as independent\n";
  }
  out << "# config: " << config.to_json() << "\n";
  return out.str();
}

void report(std::ostream* progress, const ExperimentConfig& config, const std::string& what) {
  if (progress) *progress << "[" << config.name << "] " << what << std::endl;
}

}  // namespace

std::string ExperimentConfig::to_json(int indent) const {
  json j;
  j["name"] = name;
  j["physics"] = {{"scheme", std::string(to_string(params.scheme))},
                  {"omega12", params.omega12},
                  {"omega23", params.omega23},
                  {"delta", params.delta},
                  {"gamma21", params.gamma21},
                  {"gamma32", params.gamma32},
                  {"dephasing21", params.dephasing21},
                  {"dephasing32", params.dephasing32},
                  {"c6", resolved_c6()}};
  if (lattice_vnn) j["physics"]["lattice_vnn"] = *lattice_vnn;
  j["geometry"] = geometry_to_json(geometry);
  j["partition"] = {{"mode", std::string(to_string(partition.mode))},
                    {"lower", partition.lower},
                    {"upper", partition.upper ? json(*partition.upper) : json(nullptr)},
                    {"sare", partition.sare},
                    {"high_density", high_density}};
  j["mc"] = {{"steps_per_atom", mc.steps_per_atom},
             {"samples_per_trajectory", mc.samples_per_trajectory},
             {"trajectories", mc.trajectories},
             {"realizations", mc.realizations},
             {"seed", mc.seed},
             {"memoize", mc.memoize},
             {"workers", workers}};
  j["scan"] = {{"kind", std::string(to_string(scan.kind))}, {"detunings", scan.detunings}};
  if (!scan.densities.empty()) j["scan"]["densities"] = scan.densities;
  if (scan.kind == ScanKind::deviation_map) {
    j["scan"]["couplings"] = scan.couplings;
    j["scan"]["v12"] = scan.v12;
    j["scan"]["evaluation"] =
        scan.evaluation == ModelEvaluation::chain ? "chain" : "monte_carlo";
  }
  j["output"] = {{"directory", output_dir},
                 {"bin_width", bin_width},
                 {"r_max", r_max ? json(*r_max) : json(nullptr)},
                 {"dump_positions", dump_positions}};
  j["notes"] = notes;
  return j.dump(indent);
}

ExperimentConfig ExperimentConfig::from_json(std::string_view text, std::string_view source) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line:column.
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t k = 0; k < upto; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ValidationError(std::string(source) + ":" + std::to_string(line) + ":" +
                          std::to_string(col) + ": parse error: " + e.what());
  }
  check_keys(j, "", {"name", "physics", "geometry", "partition", "mc", "scan", "output", "notes"});
  ExperimentConfig c;
  c.name = get_string(j, "", "name", "custom");
  c.notes = get_string(j, "", "notes", "");

  const json physics = j.value("physics", json::object());
  check_keys(physics, "physics",
             {"scheme", "omega12", "omega23", "delta", "gamma21", "gamma32", "dephasing21",
              "dephasing32", "c6", "lattice_vnn"});
  c.params.scheme = level_scheme_from_string(get_string(physics, "physics", "scheme", "three_level"));
  c.params.omega12 = get_number(physics, "physics", "omega12", 0.0);
  c.params.omega23 = get_number(physics, "physics", "omega23", 0.0);
  c.params.delta = get_number(physics, "physics", "delta", 0.0);
  c.params.gamma21 = get_number(physics, "physics", "gamma21", 0.0);
  c.params.gamma32 = get_number(physics, "physics", "gamma32", 0.0);
  c.params.dephasing21 = get_number(physics, "physics", "dephasing21", 0.0);
  c.params.dephasing32 = get_number(physics, "physics", "dephasing32", 0.0);
  c.c6 = get_number(physics, "physics", "c6", 0.0);
  c.lattice_vnn = get_optional_number(physics, "physics", "lattice_vnn");

  if (!j.contains("geometry")) throw ValidationError("config field geometry: missing");
  c.geometry = geometry_from_json(j.at("geometry"));

  const json partition = j.value("partition", json::object());
  check_keys(partition, "partition", {"mode", "lower", "upper", "sare", "high_density"});
  const PairingMode default_mode = c.geometry.kind == GeometryKind::lattice1d
                                       ? PairingMode::overlapping
                                       : PairingMode::disjoint;
  c.partition.mode = pairing_mode_from_string(
      get_string(partition, "partition", "mode", std::string(to_string(default_mode))));
  c.partition.lower = get_number(partition, "partition", "lower", 0.0);
  c.partition.upper = get_optional_number(partition, "partition", "upper");
  c.partition.sare = get_bool(partition, "partition", "sare", false);
  c.high_density = get_bool(partition, "partition", "high_density", false);

  const json mc = j.value("mc", json::object());
  check_keys(mc, "mc",
             {"steps_per_atom", "samples_per_trajectory", "trajectories", "realizations", "seed",
              "memoize", "workers"});
  c.mc.steps_per_atom = get_count(mc, "mc", "steps_per_atom", 10);
  c.mc.samples_per_trajectory = get_count(mc, "mc", "samples_per_trajectory", 1);
  c.mc.trajectories = get_count(mc, "mc", "trajectories", 1);
  c.mc.realizations = get_count(mc, "mc", "realizations", 1);
  c.mc.seed = get_count(mc, "mc", "seed", 0);
  c.mc.memoize = get_bool(mc, "mc", "memoize", false);
  c.workers = get_count(mc, "mc", "workers", 1);

  const json scan = j.value("scan", json::object());
  check_keys(scan, "scan", {"kind", "detunings", "densities", "couplings", "v12", "evaluation"});
  c.scan.kind = scan_kind_from_string(get_string(scan, "scan", "kind", "detuning"));
  c.scan.detunings = get_grid(scan, "scan", "detunings", {c.params.delta});
  c.scan.densities = get_grid(scan, "scan", "densities", {});
  c.scan.couplings = get_grid(scan, "scan", "couplings", default_coupling_grid());
  c.scan.v12 = get_number(scan, "scan", "v12", 2.0);
  const std::string evaluation = get_string(scan, "scan", "evaluation", "chain");
  if (evaluation == "chain") {
    c.scan.evaluation = ModelEvaluation::chain;
  } else if (evaluation == "monte_carlo") {
    c.scan.evaluation = ModelEvaluation::monte_carlo;
  } else {
    throw ValidationError("config field scan.evaluation: expected chain or monte_carlo");
  }

  const json output = j.value("output", json::object());
  check_keys(output, "output", {"directory", "bin_width", "r_max", "dump_positions"});
  c.output_dir = get_string(output, "output", "directory", ".");
  c.bin_width = get_number(output, "output", "bin_width", 0.1);
  c.r_max = get_optional_number(output, "output", "r_max");
  c.dump_positions = get_bool(output, "output", "dump_positions", false);

  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str(), path);
}

// ---- presets -------------------------------------------------------------

namespace {

std::vector<double> linspace_step(double start, double stop, double step) {
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k) out.push_back(start + static_cast<double>(k) * step);
  return out;
}

// Omega12 = 2, Omega23 = 1, gamma21 = 6, gamma32 = 25 kHz, dephasings 100 kHz.
DriveParams weak_upper_drive() {
  DriveParams p;
  p.omega12 = 2.0;
  p.omega23 = 1.0;
  p.gamma21 = 6.0;
  p.gamma32 = 0.025;
  p.dephasing21 = 0.1;
  p.dephasing32 = 0.1;
  return p;
}

// Omega12 = Omega23 = 3, gamma21 = 6, gamma32 = 25 kHz, no dephasing.
DriveParams strong_drive() {
  DriveParams p;
  p.omega12 = 3.0;
  p.omega23 = 3.0;
  p.gamma21 = 6.0;
  p.gamma32 = 0.025;
  return p;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig2", "fig4a", "fig4b", "fig5", "fig6", "fig7", "fig8", "fig8b"};
}

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig c;
  c.name = std::string(name);
  c.mc.seed = 20130101;
  c.mc.memoize = true;
  if (name == "fig2") {
    c.params.omega12 = 3.0;
    c.params.omega23 = 2.0;
    c.params.gamma21 = 6.0;
    c.params.gamma32 = 0.025;
    c.geometry = Geometry::lattice1d(1.0, 3);
    c.scan.kind = ScanKind::deviation_map;
    c.scan.detunings = linspace_step(-6.0, 6.0, 0.5);
    c.scan.couplings = default_coupling_grid();
    c.scan.v12 = 2.0;
    c.notes = "three atoms; V01 = v12, V02 = V12 = V; models evaluated from the exact chain";
  } else if (name == "fig4a") {
    c.params = weak_upper_drive();
    c.c6 = 50000.0;
    c.geometry = Geometry::gas3d_cube(500, 2e-3);
    c.partition.mode = PairingMode::disjoint;
    c.scan.kind = ScanKind::density;
    c.scan.densities = {5e-4, 2e-3, 8e-3};
    c.scan.detunings = linspace_step(-5.0, 5.0, 0.5);
    c.mc.realizations = 10;
    c.mc.trajectories = 10;
    c.notes = "3D densities in um^-3 are this preset's choice";
  } else if (name == "fig4b") {
    c.params = weak_upper_drive();
    c.geometry = Geometry::lattice1d(5.0, 50);
    c.lattice_vnn = 2.5;
    c.partition.mode = PairingMode::overlapping;
    c.partition.upper = 5.0 * 1.01;
    c.scan.kind = ScanKind::detuning;
    c.scan.detunings = linspace_step(-2.0, 4.0, 0.125);
    c.mc.trajectories = 2000;
    c.notes = "lattice constant 5 um, nearest-neighbour pairs, c6 = V_NN a^6";
  } else if (name == "fig5") {
    c.params = weak_upper_drive();
    c.c6 = 900.0 / (2.0 * std::numbers::pi);
    c.geometry = Geometry::gas1d_density(1000.0, 0.1);
    c.partition.mode = PairingMode::disjoint;
    c.scan.kind = ScanKind::g2;
    c.scan.detunings = {0.5, 1.0, 2.0, 3.0, 4.0};
    c.mc.realizations = 2000;
    c.mc.trajectories = 10;
    c.r_max = 10.0;
    c.notes = "c6 = 900/(2 pi) um^6 MHz taken literally";
  } else if (name == "fig6") {
    c.params = strong_drive();
    c.geometry = Geometry::lattice1d(5.0, 50);
    c.lattice_vnn = 100.0;
    c.partition.mode = PairingMode::overlapping;
    c.partition.upper = 5.0 * 1.01;
    c.scan.kind = ScanKind::mandel_q;
    c.scan.detunings = linspace_step(-20.0, 120.0, 2.5);
    c.mc.trajectories = 2000;
    c.notes = "lattice constant 5 um, nearest-neighbour pairs, c6 = V_NN a^6";
  } else if (name == "fig7") {
    c.params.scheme = LevelScheme::two_level;
    c.params.omega12 = 1.0;
    c.params.gamma21 = 6.0;
    c.params.delta = 7.0;
    c.c6 = 900.0;
    c.geometry = Geometry::gas1d_density(1000.0 / 3.0, 3.0);
    c.partition.mode = PairingMode::disjoint;
    c.partition.lower = 1.8;
    c.partition.upper = 2.2;
    c.high_density = true;
    c.scan.kind = ScanKind::pair_probability;
    c.scan.detunings = {7.0};
    c.mc.realizations = 20;
    c.mc.trajectories = 5;
    c.r_max = 10.0;
    c.notes =
        "ASSUMPTION: two-level decay gamma = 6 MHz and zero dephasing (rates not given for this "
        "comparison)";
  } else if (name == "fig8" || name == "fig8b") {
    c.params = name == "fig8" ? strong_drive() : weak_upper_drive();
    c.params.delta = 7.0;
    c.c6 = 900.0;
    c.geometry = Geometry::gas1d_density(1000.0 / 3.0, 3.0);
    c.partition.mode = PairingMode::disjoint;
    c.partition.lower = 1.8;
    c.partition.upper = 2.2;
    c.high_density = true;
    c.scan.kind = ScanKind::pair_probability;
    c.scan.detunings = {7.0};
    c.mc.realizations = 20;
    c.mc.trajectories = 5;
    c.r_max = 10.0;
    c.notes = "ASSUMPTION: c6 = 900 um^6 MHz as in the two-level high-density case";
  } else {
    throw ValidationError("unknown preset '" + std::string(name) + "'");
  }
  c.validate();
  return c;
}

void apply_overrides(ExperimentConfig& config, const Overrides& o) {
  if (o.output_dir) config.output_dir = *o.output_dir;
  if (o.seed) config.mc.seed = *o.seed;
  if (o.trajectories) config.mc.trajectories = *o.trajectories;
  if (o.realizations) config.mc.realizations = *o.realizations;
  if (o.workers) config.workers = *o.workers;
  if (o.bin_width) config.bin_width = *o.bin_width;
  if (o.l_lower) config.partition.lower = *o.l_lower;
  if (o.l_upper) config.partition.upper = *o.l_upper;
  if (o.memoize) config.mc.memoize = *o.memoize;
  if (o.sare) config.partition.sare = true;
  config.validate();
}

EnsembleSpec ensemble_for(const ExperimentConfig& config, double delta) {
  EnsembleSpec spec;
  spec.params = config.params;
  spec.params.delta = delta;
  spec.interaction = InteractionSpec(config.resolved_c6());
  spec.geometry = config.geometry;
  spec.partition = config.partition;
  spec.mc = config.mc;
  spec.bins = config.bins();
  spec.workers = config.workers;
  return spec;
}

// ---- scans ---------------------------------------------------------------

std::vector<OutputFile> run_experiment(const ExperimentConfig& config, std::ostream* progress) {
  config.validate();
  std::vector<OutputFile> files;
  const std::string head = header(config);
  const std::string& name = config.name;

  if (config.dump_positions && config.scan.kind != ScanKind::deviation_map) {
    Rng rng(derive_seed(config.mc.seed, 0, 0, StreamKind::geometry));
    const auto positions = sample_positions(config.geometry, rng);
    std::ostringstream out;
    out << head << "atom,x,y,z\n";
    for (std::size_t i = 0; i < positions.size(); ++i) {
      out << i << "," << fmt(positions[i].x) << "," << fmt(positions[i].y) << ","
          << fmt(positions[i].z) << "\n";
    }
    files.push_back({name + "_positions.csv", out.str()});
  }

  const auto& deltas = config.scan.detunings;
  auto progress_line = [&](std::size_t k, double delta, const EnsembleResult& r) {
    std::ostringstream msg;
    msg << "delta = " << delta << " MHz (" << k + 1 << "/" << deltas.size()
        << "): rho33 = " << rydberg_fraction(r.observables).value
        << ", pairs/realization = " << r.mean_pairs << ", solves = " << r.solves
        << ", memo hits = " << r.memo_hits;
    report(progress, config, msg.str());
  };

  switch (config.scan.kind) {
    case ScanKind::detuning: {
      std::ostringstream out;
      out << head << "delta,rho33,stderr,mean_pairs\n";
      for (std::size_t k = 0; k < deltas.size(); ++k) {
        const EnsembleResult r = run_ensemble(ensemble_for(config, deltas[k]));
        const Estimate rho = rydberg_fraction(r.observables);
        out << fmt(deltas[k]) << "," << fmt(rho.value) << "," << fmt(rho.std_error) << ","
            << fmt(r.mean_pairs) << "\n";
        progress_line(k, deltas[k], r);
      }
      files.push_back({name + "_rho33.csv", out.str()});
      break;
    }
    case ScanKind::density: {
      for (std::size_t d = 0; d < config.scan.densities.size(); ++d) {
        const double density = config.scan.densities[d];
        ExperimentConfig at = config;
        at.geometry = config.geometry.kind == GeometryKind::gas3d
                          ? Geometry::gas3d_cube(config.geometry.count, density)
                          : Geometry::gas1d(static_cast<double>(config.geometry.count) / density,
                                            config.geometry.count);
        std::ostringstream out;
        out << header(at) << "density,delta,rho33,stderr,mean_pairs\n";
        report(progress, config, "density " + fmt(density));
        for (std::size_t k = 0; k < deltas.size(); ++k) {
          const EnsembleResult r = run_ensemble(ensemble_for(at, deltas[k]));
          const Estimate rho = rydberg_fraction(r.observables);
          out << fmt(density) << "," << fmt(deltas[k]) << "," << fmt(rho.value) << ","
              << fmt(rho.std_error) << "," << fmt(r.mean_pairs) << "\n";
          progress_line(k, deltas[k], r);
        }
        files.push_back({name + "_rho33_density" + std::to_string(d) + ".csv", out.str()});
      }
      break;
    }
    case ScanKind::g2:
    case ScanKind::pair_probability: {
      const bool g2 = config.scan.kind == ScanKind::g2;
      std::ostringstream out;
      out << head
          << (g2 ? "delta,r_bin_center,g2,stderr,pair_count\n"
                 : "delta,r_bin_center,probability,stderr,pair_count,rho33_squared\n");
      for (std::size_t k = 0; k < deltas.size(); ++k) {
        const EnsembleResult r = run_ensemble(ensemble_for(config, deltas[k]));
        progress_line(k, deltas[k], r);
        const double rho = rydberg_fraction(r.observables).value;
        if (g2 && !(rho > 0.0)) {
          out << "# delta = " << fmt(deltas[k]) << ": g2 undefined (rho33 = 0)\n";
          continue;
        }
        const auto rows =
            g2 ? pair_correlation(r.observables) : pair_excitation_probability(r.observables);
        for (const auto& b : rows) {
          out << fmt(deltas[k]) << "," << fmt(b.center) << "," << fmt(b.value) << ","
              << fmt(b.std_error) << "," << b.pair_count;
          if (!g2) out << "," << fmt(rho * rho);
          out << "\n";
        }
      }
      files.push_back({name + (g2 ? "_g2.csv" : "_pair_probability.csv"), out.str()});
      break;
    }
    case ScanKind::mandel_q: {
      std::ostringstream out;
      out << head << "delta,q,stderr,rho33\n";
      for (std::size_t k = 0; k < deltas.size(); ++k) {
        const EnsembleResult r = run_ensemble(ensemble_for(config, deltas[k]));
        progress_line(k, deltas[k], r);
        const double rho = rydberg_fraction(r.observables).value;
        if (!(rho > 0.0) || r.observables.snapshots() < 2) {
          out << "# delta = " << fmt(deltas[k]) << ": Q undefined\n";
          continue;
        }
        const Estimate q = mandel_q(r.observables);
        out << fmt(deltas[k]) << "," << fmt(q.value) << "," << fmt(q.std_error) << ","
            << fmt(rho) << "\n";
      }
      files.push_back({name + "_mandel_q.csv", out.str()});
      break;
    }
    case ScanKind::deviation_map: {
      DeviationOptions options;
      options.v12 = config.scan.v12;
      options.evaluation = config.scan.evaluation;
      options.mc = config.mc;
      const DeviationMap map =
          deviation_map(config.params, config.scan.detunings, config.scan.couplings, options);
      std::ostringstream out;
      out << head << "delta,v,dev_a,dev_b,dev_c\n";
      for (const auto& p : map.points) {
        out << fmt(p.delta) << "," << fmt(p.v) << "," << fmt(p.deviation[0]) << ","
            << fmt(p.deviation[1]) << "," << fmt(p.deviation[2]) << "\n";
      }
      report(progress, config, std::to_string(map.points.size()) + " grid points");
      files.push_back({name + "_deviation.csv", out.str()});
      break;
    }
  }
  return files;
}

void write_outputs(const std::string& directory, const std::vector<OutputFile>& files) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw ValidationError("cannot create output directory '" + directory + "': " + ec.message());
  for (const auto& f : files) {
    const fs::path path = fs::path(directory) / f.name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out << f.contents;
  }
}

}  // namespace rydhm
