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

// Experiment configuration, presets, scan orchestration and CSV output.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rydhm/engine.hpp"
#include "rydhm/ensemble.hpp"
#include "rydhm/geometry.hpp"
#include "rydhm/oracle.hpp"
#include "rydhm/physics.hpp"

namespace rydhm {

enum class ScanKind { detuning, density, g2, mandel_q, pair_probability, deviation_map };

std::string_view to_string(ScanKind kind);
ScanKind scan_kind_from_string(std::string_view name);

struct ScanSpec {
  ScanKind kind = ScanKind::detuning;
  std::vector<double> detunings;
  /// Density scan: one run per density at fixed atom count.
  std::vector<double> densities;
  /// Deviation map: couplings V to the third atom and the fixed pair coupling.
  std::vector<double> couplings;
  double v12 = 2.0;
  ModelEvaluation evaluation = ModelEvaluation::chain;
};

struct ExperimentConfig {
  std::string name = "custom";
  DriveParams params;
  double c6 = 0.0;
  /// Lattices may specify the nearest-neighbour coupling instead of c6;
  /// then c6 = v_nn * a^6.
  std::optional<double> lattice_vnn;
  Geometry geometry;
  PartitionSpec partition;
  /// Pairing bounds must satisfy lower < R2 < upper with
  /// R2 = (c6 / (2 delta))^(1/6) for every scanned detuning.
  bool high_density = false;
  McConfig mc;
  double bin_width = 0.1;
  std::optional<double> r_max;
  std::size_t workers = 1;
  ScanSpec scan;
  std::string output_dir = ".";
  /// Also write the positions of realization 0.
  bool dump_positions = false;
  /// Free-form assumptions echoed into every output header.
  std::string notes;

  /// c6 after resolving lattice_vnn.
  [[nodiscard]] double resolved_c6() const;
  /// Bins for this geometry (lattice: centred on multiples of a).
  [[nodiscard]] BinSpec bins() const;
  /// Throws ValidationError with the offending field name.
  void validate() const;

  [[nodiscard]] std::string to_json(int indent = -1) const;
  /// Parses the JSON config format; errors carry line/column or field path.
  static ExperimentConfig from_json(std::string_view text, std::string_view source = "<config>");
  static ExperimentConfig from_file(const std::string& path);
};

std::vector<std::string> preset_names();
/// Experiment definitions mirroring the reference figures (fig2, fig4a,
/// fig4b, fig5, fig6, fig7, fig8, fig8b). Throws ValidationError for an
/// unknown name.
ExperimentConfig preset(std::string_view name);

/// Command-line overrides (flags > file > preset defaults).
struct Overrides {
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trajectories;
  std::optional<std::size_t> realizations;
  std::optional<std::size_t> workers;
  std::optional<double> bin_width;
  std::optional<double> l_lower;
  std::optional<double> l_upper;
  std::optional<bool> memoize;
  bool sare = false;
};

void apply_overrides(ExperimentConfig& config, const Overrides& overrides);

struct OutputFile {
  std::string name;
  std::string contents;
};

/// Runs the configured scan; progress lines go to `progress` when non-null.
std::vector<OutputFile> run_experiment(const ExperimentConfig& config,
                                       std::ostream* progress = nullptr);

/// Writes files into the directory (created if missing).
void write_outputs(const std::string& directory, const std::vector<OutputFile>& files);

/// Ensemble for one detuning (and the configured geometry).
EnsembleSpec ensemble_for(const ExperimentConfig& config, double delta);

}  // namespace rydhm
