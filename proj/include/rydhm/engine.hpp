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

// Monte Carlo sampler of the many-body steady state. Each step picks a unit
// (pair or single), folds the interaction with every other Rydberg atom into
// effective detunings, solves the unit's steady state and resamples the
// unit's levels from it.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "rydhm/geometry.hpp"
#include "rydhm/liouvillian.hpp"
#include "rydhm/physics.hpp"
#include "rydhm/rng.hpp"
#include "rydhm/steady.hpp"

namespace rydhm {

/// Definite level label of every atom.
struct MicroState {
  LevelScheme scheme = LevelScheme::three_level;
  std::vector<Label> labels;

  static MicroState ground(std::size_t atoms, LevelScheme scheme);

  [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
  [[nodiscard]] std::size_t rydberg_count() const noexcept;
  void validate() const;

  friend bool operator==(const MicroState&, const MicroState&) = default;
};

struct McConfig {
  std::size_t steps_per_atom = 10;
  std::size_t samples_per_trajectory = 1;
  std::size_t trajectories = 1;
  std::size_t realizations = 1;
  std::uint64_t seed = 0;
  /// Reuse unit steady states keyed on (effective detunings quantized to
  /// kMemoQuantum, coupling). Off by default.
  bool memoize = false;

  void validate() const;
};

inline constexpr double kMemoQuantum = 1e-6;  // MHz

inline constexpr std::size_t kNoPartner = std::numeric_limits<std::size_t>::max();

/// A single atom (second == kNoPartner) or a pair.
struct Unit {
  std::size_t first = 0;
  std::size_t second = kNoPartner;

  [[nodiscard]] bool is_pair() const noexcept { return second != kNoPartner; }
  friend bool operator==(const Unit&, const Unit&) = default;
};

/// delta - sum of V_ij over atoms j currently in the Rydberg level, skipping
/// j == atom and j == exclude.
double effective_detuning(std::size_t atom, const MicroState& state,
                          std::span<const Position> positions, const InteractionSpec& spec,
                          double delta, std::optional<std::size_t> exclude = std::nullopt);

/// Uniform draw over pairs followed by singles.
Unit select_unit(const PairPartition& partition, Rng& rng);

/// Index l (0-based) of the largest state with sum_{k<l} p_k < r and p_l > 0;
/// falls back to the first state with nonzero probability.
std::size_t sample_state(std::span<const double> probabilities, double r);

/// Probability-conserving flow matrix B_ab = sigma_a - delta_ab whose unique
/// fixed point is sigma. Works for single (length 3 or 2) and pair (9 or 4)
/// distributions alike.
struct PropagationMatrix {
  int dim = 0;
  std::vector<double> values;  // row-major

  [[nodiscard]] double operator()(int row, int col) const {
    return values[static_cast<std::size_t>(row) * dim + col];
  }
  void apply(std::span<const double> rho, std::span<double> out) const;
};

PropagationMatrix build_propagation_matrix(std::span<const double> sigma);

/// Stateful sampler for one geometry and partition. Owns reusable generator
/// builders and solver workspaces; not thread-safe, use one per worker.
class HybridSampler {
 public:
  HybridSampler(const DriveParams& params, InteractionSpec spec,
                std::vector<Position> positions, PairPartition partition,
                bool memoize = false);

  [[nodiscard]] std::size_t atoms() const noexcept { return positions_.size(); }
  [[nodiscard]] const PairPartition& partition() const noexcept { return partition_; }
  [[nodiscard]] const std::vector<Position>& positions() const noexcept { return positions_; }
  [[nodiscard]] const DriveParams& params() const noexcept { return params_; }
  [[nodiscard]] std::size_t unit_count() const noexcept { return partition_.unit_count(); }
  [[nodiscard]] Unit unit(std::size_t k) const;

  /// Steady-state distribution of `unit` given every other atom's label:
  /// levels entries for a single, levels^2 for a pair (first atom major).
  void unit_distribution(const Unit& unit, const MicroState& state, std::span<double> out);

  /// One step in place; returns the unit that was updated.
  Unit step(MicroState& state, Rng& rng);

  /// steps_per_atom * N steps from the all-ground state, then
  /// samples_per_trajectory snapshots spaced by N steps.
  void run_trajectory(const McConfig& mc, std::uint64_t seed,
                      const std::function<void(const MicroState&)>& on_sample);
  std::vector<MicroState> run_trajectory(const McConfig& mc, std::uint64_t seed);

  [[nodiscard]] std::uint64_t memo_hits() const noexcept { return memo_hits_; }
  [[nodiscard]] std::uint64_t solves() const noexcept { return solves_; }

 private:
  struct MemoKey {
    std::int64_t d1;
    std::int64_t d2;
    std::uint64_t v;
    bool pair;
    friend bool operator==(const MemoKey&, const MemoKey&) = default;
  };
  struct MemoHash {
    std::size_t operator()(const MemoKey& k) const noexcept;
  };

  double quantize(double delta, std::int64_t& key) const;
  void solve_unit(const Unit& unit, std::span<const double> detunings, double coupling,
                  std::span<double> out);

  DriveParams params_;
  InteractionSpec spec_;
  std::vector<Position> positions_;
  PairPartition partition_;
  bool memoize_;
  int levels_;
  GeneratorBuilder single_builder_;
  GeneratorBuilder pair_builder_;
  SteadySolver solver_;
  std::unordered_map<MemoKey, std::array<double, 9>, MemoHash> memo_;
  std::uint64_t memo_hits_ = 0;
  std::uint64_t solves_ = 0;
};

/// One step with a throwaway sampler (convenience for tests and one-offs).
MicroState mc_step(const MicroState& state, const PairPartition& partition,
                   std::span<const Position> positions, const DriveParams& params,
                   const InteractionSpec& spec, Rng& rng);

std::vector<MicroState> run_trajectory(std::span<const Position> positions,
                                       const PairPartition& partition,
                                       const DriveParams& params, const InteractionSpec& spec,
                                       const McConfig& mc, std::uint64_t seed);

}  // namespace rydhm
