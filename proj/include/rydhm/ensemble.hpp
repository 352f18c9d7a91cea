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

// Orchestration of independent (realization, trajectory) tasks.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "rydhm/engine.hpp"
#include "rydhm/geometry.hpp"
#include "rydhm/observables.hpp"
#include "rydhm/physics.hpp"

namespace rydhm {

struct PartitionSpec {
  PairingMode mode = PairingMode::disjoint;
  double lower = 0.0;
  /// Upper pairing bound; defaults to the per-realization nearest-neighbour
  /// scale.
  std::optional<double> upper;
  /// Force zero pairs (single-atom rate-equation limit).
  bool sare = false;
};

struct EnsembleSpec {
  DriveParams params;
  InteractionSpec interaction;
  Geometry geometry;
  PartitionSpec partition;
  McConfig mc;
  BinSpec bins;
  std::size_t workers = 1;
};

struct EnsembleResult {
  ObservableAccumulator observables;
  std::uint64_t solves = 0;
  std::uint64_t memo_hits = 0;
  /// Averages over realizations.
  double mean_pairs = 0.0;
  double mean_upper_bound = 0.0;
};

/// Partition of one realization according to spec (NN-scale default bound,
/// SARE override).
PairPartition partition_for(const PartitionSpec& spec, std::span<const Position> positions);

/// Runs every (realization, trajectory) task over `workers` threads.
/// Accumulated counts are integers, so results do not depend on the worker
/// count or scheduling.
EnsembleResult run_ensemble(const EnsembleSpec& spec);

}  // namespace rydhm
