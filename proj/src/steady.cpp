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

#include "rydhm/steady.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rydhm/error.hpp"

namespace rydhm {

std::vector<int> UpperTriangular::vanishing_diagonals() const {
  double max_diag = 0.0;
  for (int k = 0; k < dim; ++k) max_diag = std::max(max_diag, std::abs((*this)(k, k)));
  std::vector<int> out;
  for (int k = 0; k < dim; ++k) {
    if (std::abs((*this)(k, k)) <= kRankTolerance * max_diag) out.push_back(k);
  }
  return out;
}

namespace {

// In-place Givens triangularization of a dense row-major n x n array.
// row_end[i] is one past the last structurally nonzero column of row i.
void givens_triangularize(int n, double* a, int* row_end) {
  for (int j = 0; j < n; ++j) {
    double* pivot = a + static_cast<std::size_t>(j) * n;
    for (int i = j + 1; i < n; ++i) {
      double* row = a + static_cast<std::size_t>(i) * n;
      const double b = row[j];
      if (b == 0.0) continue;
      const double p = pivot[j];
      const double r = std::sqrt(p * p + b * b);
      const double c = p / r;
      const double s = b / r;
      const int end = std::max(row_end[j], row_end[i]);
      pivot[j] = r;
      row[j] = 0.0;
      for (int k = j + 1; k < end; ++k) {
        const double u = pivot[k];
        const double v = row[k];
        pivot[k] = c * u + s * v;
        row[k] = c * v - s * u;
      }
      row_end[j] = end;
      row_end[i] = end;
    }
  }
}

void scatter(int n, std::span<const Triplet> entries, std::vector<double>& a,
             std::vector<int>& row_end) {
  a.assign(static_cast<std::size_t>(n) * n, 0.0);
  row_end.assign(static_cast<std::size_t>(n), 0);
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw ValidationError("matrix entry outside a " + std::to_string(n) + "x" +
                            std::to_string(n) + " matrix");
    }
    a[static_cast<std::size_t>(t.row) * n + t.col] += t.value;
    row_end[t.row] = std::max(row_end[t.row], t.col + 1);
  }
}

// Scales every row to unit max norm. The null space is unchanged, and the
// rank tolerance no longer depends on how far the largest energies (huge
// couplings of nearly coincident atoms) sit above the decay rates.
void equilibrate_rows(int n, std::vector<double>& a, const std::vector<int>& row_end) {
  for (int i = 0; i < n; ++i) {
    double* row = a.data() + static_cast<std::size_t>(i) * n;
    double m = 0.0;
    for (int k = 0; k < row_end[i]; ++k) m = std::max(m, std::abs(row[k]));
    if (m == 0.0 || m == 1.0) continue;
    const double inv = 1.0 / m;
    for (int k = 0; k < row_end[i]; ++k) row[k] *= inv;
  }
}

}  // namespace

UpperTriangular qr_givens(int dim, std::span<const Triplet> entries) {
  UpperTriangular r;
  r.dim = dim;
  std::vector<int> row_end;
  scatter(dim, entries, r.values, row_end);
  givens_triangularize(dim, r.values.data(), row_end.data());
  return r;
}

UpperTriangular qr_givens(const GeneratorMatrix& m) {
  return qr_givens(m.dim(), m.entries);
}

int SteadySolver::factorize(int dim, std::span<const Triplet> entries) {
  scatter(dim, entries, work_, row_end_);
  equilibrate_rows(dim, work_, row_end_);
  givens_triangularize(dim, work_.data(), row_end_.data());
  double max_diag = 0.0;
  for (int k = 0; k < dim; ++k) {
    max_diag = std::max(max_diag, std::abs(work_[static_cast<std::size_t>(k) * dim + k]));
  }
  const double tol = kRankTolerance * max_diag;
  int free_index = -1;
  int vanishing = 0;
  for (int k = 0; k < dim; ++k) {
    if (std::abs(work_[static_cast<std::size_t>(k) * dim + k]) <= tol) {
      free_index = k;
      ++vanishing;
    }
  }
  if (vanishing != 1) {
    throw NonUniqueSteadyStateError(
        "generator has " + std::to_string(vanishing) +
        " vanishing diagonal elements in R; expected exactly one");
  }
  return free_index;
}

void SteadySolver::back_substitute(int dim, int free_index, int stop) {
  x_.assign(static_cast<std::size_t>(dim), 0.0);
  x_[free_index] = 1.0;
  for (int i = free_index - 1; i >= stop; --i) {
    const double* row = work_.data() + static_cast<std::size_t>(i) * dim;
    double acc = 0.0;
    const int end = row_end_[i];
    for (int k = i + 1; k < end && k <= free_index; ++k) acc += row[k] * x_[k];
    x_[i] = -acc / row[i];
  }
}

void SteadySolver::normalize(int dim, int population_begin) {
  double sum = 0.0;
  for (int k = population_begin; k < dim; ++k) sum += x_[k];
  if (!(std::abs(sum) >= 1e-14) || !std::isfinite(sum)) {
    throw DegenerateSolutionError("steady-state populations sum to " + std::to_string(sum));
  }
  const double inv = 1.0 / sum;
  for (auto& v : x_) v *= inv;
  double clamped_sum = 0.0;
  for (int k = population_begin; k < dim; ++k) {
    if (x_[k] < 0.0) {
      if (x_[k] < -kNegativeClamp) {
        throw DegenerateSolutionError("steady-state population " + std::to_string(x_[k]) +
                                      " is significantly negative");
      }
      x_[k] = 0.0;
    }
    clamped_sum += x_[k];
  }
  if (clamped_sum != 1.0) {
    const double fix = 1.0 / clamped_sum;
    for (auto& v : x_) v *= fix;
  }
}

void SteadySolver::solve(const GeneratorMatrix& m, bool full_vector, SteadyState& out) {
  const int dim = m.dim();
  const int pop = m.embedding.population_begin();
  const int free_index = factorize(dim, m.entries);
  back_substitute(dim, free_index, full_vector ? 0 : std::min(pop, free_index));
  normalize(dim, pop);
  const int configs = m.embedding.matrix_dim();
  out.populations.resize(static_cast<std::size_t>(configs));
  for (int c = 0; c < configs; ++c) out.populations[c] = x_[m.embedding.population_slot(c)];
  if (full_vector) {
    out.embedded = x_;
  } else {
    out.embedded.clear();
  }
}

void SteadySolver::solve_populations(const GeneratorMatrix& m,
                                     std::span<double> populations) {
  const int dim = m.dim();
  const int pop = m.embedding.population_begin();
  const int free_index = factorize(dim, m.entries);
  back_substitute(dim, free_index, std::min(pop, free_index));
  normalize(dim, pop);
  const int configs = m.embedding.matrix_dim();
  for (int c = 0; c < configs; ++c) populations[c] = x_[m.embedding.population_slot(c)];
}

std::vector<double> SteadySolver::null_vector(int dim, std::span<const Triplet> entries,
                                              int population_begin) {
  if (population_begin < 0 || population_begin >= dim) {
    throw ValidationError("population block must be non-empty");
  }
  const int free_index = factorize(dim, entries);
  back_substitute(dim, free_index, 0);
  normalize(dim, population_begin);
  return x_;
}

SteadyState steady_state(const GeneratorMatrix& m, bool full_vector) {
  SteadySolver solver;
  SteadyState out;
  solver.solve(m, full_vector, out);
  return out;
}

}  // namespace rydhm
