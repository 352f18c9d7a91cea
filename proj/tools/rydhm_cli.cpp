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

// Command-line front end: run presets or JSON configs and write CSV tables.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rydhm/error.hpp"
#include "rydhm/experiment.hpp"

namespace {

int run(const std::string& preset_name, const std::string& config_path,
        const rydhm::Overrides& overrides, bool dry_run, bool quiet) {
  rydhm::ExperimentConfig config = config_path.empty() ? rydhm::preset(preset_name)
                                                       : rydhm::ExperimentConfig::from_file(config_path);
  rydhm::apply_overrides(config, overrides);
  if (dry_run) {
    std::cout << config.to_json(2) << "\n";
    return 0;
  }
  const auto files = rydhm::run_experiment(config, quiet ? nullptr : &std::cerr);
  rydhm::write_outputs(config.output_dir, files);
  for (const auto& f : files) std::cout << config.output_dir << "/" << f.name << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid-model Monte Carlo for driven Rydberg gases"};
  app.set_version_flag("--version", std::string(RYDHM_VERSION));
  app.require_subcommand(1);

  auto* list = app.add_subcommand("presets", "List the built-in experiment presets");

  auto* cmd = app.add_subcommand("run", "Run a preset or a JSON experiment config");
  std::string preset_name;
  std::string config_path;
  rydhm::Overrides o;
  bool memo = false;
  bool no_memo = false;
  bool dry_run = false;
  bool quiet = false;
  auto* p = cmd->add_option("--preset", preset_name, "Preset name (see 'presets')");
  auto* c = cmd->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  p->excludes(c);
  cmd->add_option("--out", o.output_dir, "Output directory");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--trajectories", o.trajectories, "Trajectories per realization")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--realizations", o.realizations, "Geometry realizations")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--bin-width", o.bin_width, "Radial bin width in um")->check(CLI::PositiveNumber);
  cmd->add_option("--l-lower", o.l_lower, "Lower pairing bound in um");
  cmd->add_option("--l-upper", o.l_upper, "Upper pairing bound in um");
  cmd->add_flag("--sare", o.sare, "Disable pairing (single-atom rate equations)");
  auto* m = cmd->add_flag("--memo", memo, "Memoize unit steady states");
  cmd->add_flag("--no-memo", no_memo, "Disable memoization")->excludes(m);
  cmd->add_flag("--dry-run", dry_run, "Print the resolved config and exit");
  cmd->add_flag("-q,--quiet", quiet, "Suppress progress output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& name : rydhm::preset_names()) {
        const auto cfg = rydhm::preset(name);
        std::cout << name << "  " << rydhm::to_string(cfg.scan.kind) << "  " << cfg.notes << "\n";
      }
      return 0;
    }
    if (preset_name.empty() && config_path.empty()) {
      std::cerr << "error: run needs --preset or --config\n";
      return 2;
    }
    if (memo) o.memoize = true;
    if (no_memo) o.memoize = false;
    return run(preset_name, config_path, o, dry_run, quiet);
  } catch (const rydhm::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
