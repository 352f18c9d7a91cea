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

// Real sparse generators of the single-atom, pair and exact N-atom master
// equations
//
//   d rho / dt = -i [H, rho] + sum_J (J rho J^+ - {J^+ J, rho} / 2) - D o rho
//
// with decay channels 2->1 (gamma21) and 3->2 (gamma32), pure dephasing of
// the coherences and the pairwise interaction V S33 (x) S33.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rydhm/physics.hpp"

namespace rydhm {

/// Maps density-matrix elements onto slots of a real vector.
///
/// Each coherence rho_ab (a < b) owns two adjacent slots (Re, Im); the
/// populations occupy the trailing block, highest configuration first so that
/// the all-ground population is the final slot.
class RealEmbedding {
 public:
  RealEmbedding() = default;
  explicit RealEmbedding(int matrix_dim);

  [[nodiscard]] int matrix_dim() const noexcept { return matrix_dim_; }
  [[nodiscard]] int size() const noexcept { return matrix_dim_ * matrix_dim_; }
  [[nodiscard]] int population_begin() const noexcept {
    return matrix_dim_ * (matrix_dim_ - 1);
  }

  [[nodiscard]] int population_slot(int config) const noexcept {
    return size() - 1 - config;
  }
  [[nodiscard]] int config_of_population_slot(int slot) const noexcept {
    return size() - 1 - slot;
  }
  /// Slot of Re rho_ab; requires a != b. Im rho_ab (a < b) is the next slot.
  [[nodiscard]] int real_slot(int a, int b) const noexcept;
  [[nodiscard]] int imag_slot(int a, int b) const noexcept { return real_slot(a, b) + 1; }

  friend bool operator==(const RealEmbedding&, const RealEmbedding&) = default;

 private:
  int matrix_dim_ = 0;
  std::vector<int> coherence_index_;  // (a, b) with a < b -> coherence number
};

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Sparse real square generator, entries sorted column-major and unique.
struct GeneratorMatrix {
  RealEmbedding embedding;
  std::vector<Triplet> entries;

  [[nodiscard]] int dim() const noexcept { return embedding.size(); }

  /// out = M v
  void apply(std::span<const double> v, std::span<double> out) const;
  /// Max absolute row sum.
  [[nodiscard]] double norm_inf() const;
  /// Per column, the sum of entries in population rows (zero for a
  /// trace-preserving generator).
  [[nodiscard]] std::vector<double> population_column_sums() const;
  /// Row-major dense copy.
  [[nodiscard]] std::vector<double> dense() const;
};

/// Builds generators for a fixed set of drive parameters and atom count.
///
/// The sparsity pattern depends only on the drive parameters; per-atom
/// detunings and pair couplings enter through diagonal energies and are
/// rewritten in place on every build() call.
class GeneratorBuilder {
 public:
  static constexpr int kMaxAtoms = 4;

  GeneratorBuilder(const DriveParams& params, int atoms);

  [[nodiscard]] int atoms() const noexcept { return atoms_; }
  [[nodiscard]] int levels() const noexcept { return levels_; }
  [[nodiscard]] int configurations() const noexcept { return configs_; }
  [[nodiscard]] const DriveParams& params() const noexcept { return params_; }

  /// detunings: one per atom. couplings: upper triangle of V in row order,
  /// (0,1), (0,2), ..., (1,2), ... The returned reference stays valid until
  /// the next call.
  const GeneratorMatrix& build(std::span<const double> detunings,
                               std::span<const double> couplings);

  /// Level of atom `atom` in configuration `config` (atom 0 most significant).
  [[nodiscard]] int level_of(int config, int atom) const noexcept;

 private:
  struct EnergySlot {
    int coherence_row_real;  // index into entries of (x, y)
    int coherence_row_imag;  // index into entries of (y, x)
    int coeff_begin;         // into coefficients_
  };

  DriveParams params_;
  int atoms_;
  int levels_;
  int configs_;
  int pair_count_;
  std::vector<double> static_values_;
  std::vector<EnergySlot> energy_slots_;
  std::vector<signed char> coefficients_;  // per slot: atoms_ + pair_count_
  GeneratorMatrix matrix_;
};

/// 9x9 (3-level) or 4x4 (2-level) generator with delta replaced by delta_eff.
GeneratorMatrix build_single_generator(const DriveParams& params, double delta_eff);

/// 81x81 (16x16) pair generator with per-atom effective detunings.
GeneratorMatrix build_pair_generator(const DriveParams& params, double delta_eff_1,
                                     double delta_eff_2, double v12);

/// Full N-atom generator with all couplings exact. `couplings` is a dense
/// symmetric n x n matrix in row-major order (diagonal ignored); every atom
/// sees the bare detuning params.delta. Throws SizeLimitError for n > 4.
GeneratorMatrix build_exact_generator(const DriveParams& params,
                                      std::span<const double> couplings, int n);

}  // namespace rydhm
