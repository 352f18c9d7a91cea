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

// Exact few-atom steady states and the comparison of simplified three-atom
// models (singles only, three overlapping pairs, pair plus single) against
// them.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "rydhm/engine.hpp"
#include "rydhm/geometry.hpp"
#include "rydhm/physics.hpp"

namespace rydhm {

struct FewAtomDistribution {
  int atoms = 0;
  int levels = 0;
  /// Probability per configuration (atom 0 most significant digit).
  std::vector<double> joint;
  std::vector<double> per_atom_rydberg;

  /// Mean Rydberg population over atoms.
  [[nodiscard]] double rydberg_fraction() const;
  /// Total probability of configurations with at least `k` Rydberg atoms.
  [[nodiscard]] double probability_at_least_rydberg(int k) const;
};

/// Steady state of the full n-atom master equation (n <= 4). `couplings` is
/// the symmetric n x n coupling matrix, row-major.
FewAtomDistribution exact_steady_state(const DriveParams& params,
                                       std::span<const double> couplings, int n);

/// Stationary distribution of the Monte Carlo chain for a forced partition of
/// a few atoms, computed deterministically from the chain's transition
/// matrix over all joint configurations (n <= 6).
FewAtomDistribution chain_steady_state(const DriveParams& params,
                                       std::span<const double> couplings, int n,
                                       const PairPartition& partition);

/// The same quantity estimated by running the sampler.
FewAtomDistribution sampled_steady_state(const DriveParams& params,
                                         std::span<const double> couplings, int n,
                                         const PairPartition& partition, const McConfig& mc);

enum class ThreeAtomModel { singles = 0, overlapping_pairs = 1, pair_plus_single = 2 };

std::string_view to_string(ThreeAtomModel model);

/// Forced partition of atoms {0, 1, 2} for a simplified model.
PairPartition three_atom_partition(ThreeAtomModel model);

/// Symmetric 3x3 coupling matrix with V01 = v12 and V02 = V12 = v.
std::array<double, 9> three_atom_couplings(double v12, double v);

enum class ModelEvaluation { chain, monte_carlo };

struct DeviationOptions {
  double v12 = 2.0;
  ModelEvaluation evaluation = ModelEvaluation::chain;
  /// Used when evaluation == monte_carlo.
  McConfig mc{10, 1, 100000, 1, 0, true};
};

struct DeviationPoint {
  double delta = 0.0;
  double v = 0.0;
  double exact = 0.0;
  std::array<double, 3> model{};      // rho33 for singles, overlapping pairs, pair+single
  std::array<double, 3> deviation{};  // |model - exact| / exact
};

struct DeviationMap {
  double v12 = 0.0;
  std::vector<double> deltas;
  std::vector<double> vs;
  /// Row-major over (delta, v); points with exact rho33 == 0 are skipped.
  std::vector<DeviationPoint> points;

  /// Model with the smallest deviation at a point.
  [[nodiscard]] static ThreeAtomModel best_model(const DeviationPoint& p);
};

/// 30 log-spaced couplings in [1e-2, 1e1] MHz.
std::vector<double> default_coupling_grid();

DeviationMap deviation_map(const DriveParams& params, std::span<const double> deltas,
                           std::span<const double> vs, const DeviationOptions& options = {});

}  // namespace rydhm
