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

// Steady state of a trace-preserving generator: Givens-rotation QR
// factorization followed by back substitution on the single vanishing
// diagonal of R.

#pragma once

#include <span>
#include <vector>

#include "rydhm/liouvillian.hpp"

namespace rydhm {

/// |R_kk| <= kRankTolerance * max_i |R_ii| counts as a vanishing diagonal.
inline constexpr double kRankTolerance = 1e-10;
/// Populations in [-kNegativeClamp, 0) are clamped to zero.
inline constexpr double kNegativeClamp = 1e-9;

/// Dense upper-triangular factor R of M = Q R, row-major.
struct UpperTriangular {
  int dim = 0;
  std::vector<double> values;

  [[nodiscard]] double operator()(int row, int col) const {
    return values[static_cast<std::size_t>(row) * dim + col];
  }
  /// Indices k with |R_kk| <= kRankTolerance * max |R_ii|.
  [[nodiscard]] std::vector<int> vanishing_diagonals() const;
};

/// R factor of a square sparse matrix by column-wise Givens elimination.
UpperTriangular qr_givens(int dim, std::span<const Triplet> entries);
UpperTriangular qr_givens(const GeneratorMatrix& m);

struct SteadyState {
  /// Probability per classical configuration; configuration digits are the
  /// atoms' level indices, atom 0 most significant.
  std::vector<double> populations;
  /// Full embedded vector (coherences and populations), normalized so that
  /// the populations sum to one. Empty unless requested.
  std::vector<double> embedded;
};

/// Reusable workspace; one instance per thread. Rows are scaled to unit max
/// norm before factorization, so the rank tolerance applies to the R factor of
/// the row-equilibrated matrix.
class SteadySolver {
 public:
  /// Computes the steady state. With full_vector == false back substitution
  /// stops once every population slot is resolved.
  void solve(const GeneratorMatrix& m, bool full_vector, SteadyState& out);

  /// Population-only solve into a caller-provided buffer of length
  /// m.embedding.matrix_dim().
  void solve_populations(const GeneratorMatrix& m, std::span<double> populations);

  /// Null vector of a generic square matrix whose slots
  /// [population_begin, dim) form a probability vector. Returns the full
  /// normalized vector.
  std::vector<double> null_vector(int dim, std::span<const Triplet> entries,
                                  int population_begin);

 private:
  // Factorizes into work_, returns the free index.
  int factorize(int dim, std::span<const Triplet> entries);
  // Back substitution into x_ down to (and including) row `stop`.
  void back_substitute(int dim, int free_index, int stop);
  void normalize(int dim, int population_begin);

  std::vector<double> work_;
  std::vector<int> row_end_;
  std::vector<double> x_;
};

SteadyState steady_state(const GeneratorMatrix& m, bool full_vector = false);

}  // namespace rydhm
