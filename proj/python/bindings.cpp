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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "rydhm/ensemble.hpp"
#include "rydhm/error.hpp"
#include "rydhm/experiment.hpp"
#include "rydhm/liouvillian.hpp"
#include "rydhm/oracle.hpp"
#include "rydhm/steady.hpp"

namespace py = pybind11;
using namespace rydhm;

namespace {

py::list bin_values(const std::vector<BinValue>& values) {
  py::list out;
  for (const auto& b : values) {
    py::dict d;
    d["r"] = b.center;
    d["value"] = b.value;
    d["stderr"] = b.std_error;
    d["pairs"] = b.pair_count;
    out.append(d);
  }
  return out;
}

py::dict run_point(const std::string& config_json, double delta) {
  const ExperimentConfig config = ExperimentConfig::from_json(config_json);
  EnsembleResult r;
  {
    py::gil_scoped_release release;
    r = run_ensemble(ensemble_for(config, delta));
  }
  py::dict d;
  const Estimate rho = rydberg_fraction(r.observables);
  d["delta"] = delta;
  d["rho33"] = rho.value;
  d["stderr"] = rho.std_error;
  d["mean_pairs"] = r.mean_pairs;
  d["solves"] = r.solves;
  d["memo_hits"] = r.memo_hits;
  d["snapshots"] = r.observables.snapshots();
  if (r.observables.sum_rydberg() > 0 && r.observables.snapshots() > 1) {
    const Estimate q = mandel_q(r.observables);
    d["mandel_q"] = py::make_tuple(q.value, q.std_error);
    d["g2"] = bin_values(pair_correlation(r.observables));
  } else {
    d["mandel_q"] = py::none();
    d["g2"] = py::list();
  }
  d["pair_probability"] = bin_values(pair_excitation_probability(r.observables));
  return d;
}

py::dict distribution(const FewAtomDistribution& f) {
  py::dict d;
  d["joint"] = f.joint;
  d["per_atom_rydberg"] = f.per_atom_rydberg;
  d["rydberg_fraction"] = f.rydberg_fraction();
  return d;
}

std::vector<double> flatten(const std::vector<std::vector<double>>& m) {
  std::vector<double> out;
  for (const auto& row : m) {
    if (row.size() != m.size()) throw ValidationError("coupling matrix must be square");
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hybrid-model Rydberg gas simulator";
  m.attr("__version__") = RYDHM_VERSION;

  // Later registrations are tried first, so the subclass goes last.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::enum_<LevelScheme>(m, "LevelScheme")
      .value("three_level", LevelScheme::three_level)
      .value("two_level", LevelScheme::two_level);

  py::class_<DriveParams>(m, "DriveParams")
      .def(py::init<>())
      .def_readwrite("omega12", &DriveParams::omega12)
      .def_readwrite("omega23", &DriveParams::omega23)
      .def_readwrite("delta", &DriveParams::delta)
      .def_readwrite("gamma21", &DriveParams::gamma21)
      .def_readwrite("gamma32", &DriveParams::gamma32)
      .def_readwrite("dephasing21", &DriveParams::dephasing21)
      .def_readwrite("dephasing32", &DriveParams::dephasing32)
      .def_readwrite("scheme", &DriveParams::scheme)
      .def("validate", &DriveParams::validate)
      .def("levels", &DriveParams::levels);

  m.def(
      "single_steady_state",
      [](const DriveParams& p, double delta) {
        return steady_state(build_single_generator(p, delta)).populations;
      },
      py::arg("params"), py::arg("delta"),
      "Level populations of one atom at the given effective detuning.");
  m.def(
      "pair_steady_state",
      [](const DriveParams& p, double delta1, double delta2, double v) {
        return steady_state(build_pair_generator(p, delta1, delta2, v)).populations;
      },
      py::arg("params"), py::arg("delta1"), py::arg("delta2"), py::arg("v"),
      "Joint populations of a pair, atom 0 as the most significant digit.");
  m.def(
      "exact_steady_state",
      [](const DriveParams& p, const std::vector<std::vector<double>>& couplings) {
        const auto flat = flatten(couplings);
        return distribution(exact_steady_state(p, flat, static_cast<int>(couplings.size())));
      },
      py::arg("params"), py::arg("couplings"),
      "Full master-equation steady state for up to four atoms.");
  m.def(
      "deviation_map",
      [](const DriveParams& p, const std::vector<double>& deltas, const std::vector<double>& vs,
         double v12) {
        const DeviationMap map = deviation_map(p, deltas, vs, {.v12 = v12});
        py::list out;
        for (const auto& pt : map.points) {
          py::dict d;
          d["delta"] = pt.delta;
          d["v"] = pt.v;
          d["exact"] = pt.exact;
          d["model"] = pt.model;
          d["deviation"] = pt.deviation;
          out.append(d);
        }
        return out;
      },
      py::arg("params"), py::arg("deltas"), py::arg("vs"), py::arg("v12") = 2.0);

  m.def("preset_names", &preset_names);
  m.def(
      "preset", [](const std::string& name) { return preset(name).to_json(2); }, py::arg("name"),
      "Preset configuration as a JSON string.");
  m.def(
      "validate_config",
      [](const std::string& json) { return ExperimentConfig::from_json(json).to_json(2); },
      py::arg("config"), "Parses and validates a JSON config; returns it normalized.");
  m.def("run_point", &run_point, py::arg("config"), py::arg("delta"),
        "Runs the ensemble of a JSON config at one detuning.");
  m.def(
      "run_experiment",
      [](const std::string& json) {
        const ExperimentConfig config = ExperimentConfig::from_json(json);
        std::vector<OutputFile> files;
        {
          py::gil_scoped_release release;
          files = run_experiment(config);
        }
        std::map<std::string, std::string> out;
        for (auto& f : files) out[f.name] = std::move(f.contents);
        return out;
      },
      py::arg("config"), "Runs a JSON config; returns file name -> CSV contents.");
}
