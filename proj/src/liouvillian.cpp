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

#include "rydhm/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "rydhm/error.hpp"

namespace rydhm {

namespace {

using Complex = std::complex<double>;

struct RawEntry {
  int row;
  int col;
  double value;
  bool keep;  // reserved energy position, kept even when zero
};

// Drive, decay and dephasing constants of one atom in terms of level indices.
struct AtomModel {
  struct Transition {
    int lower;
    int upper;
    double rate;
  };
  std::vector<Transition> drives;
  std::vector<Transition> decays;
  std::vector<double> dephasing;  // levels x levels, symmetric
  int levels = 0;
  int top = 0;

  explicit AtomModel(const DriveParams& p) {
    if (p.scheme == LevelScheme::three_level) {
      levels = 3;
      drives = {{0, 1, p.omega12}, {1, 2, p.omega23}};
      decays = {{0, 1, p.gamma21}, {1, 2, p.gamma32}};
      dephasing = {0.0,
                   p.dephasing21,
                   p.dephasing21 + p.dephasing32,
                   p.dephasing21,
                   0.0,
                   p.dephasing32,
                   p.dephasing21 + p.dephasing32,
                   p.dephasing32,
                   0.0};
    } else {
      levels = 2;
      drives = {{0, 1, p.omega12}};
      decays = {{0, 1, p.gamma21}};
      dephasing = {0.0, p.dephasing21, p.dephasing21, 0.0};
    }
    top = levels - 1;
  }

  [[nodiscard]] double decay_out(int level) const {
    double total = 0.0;
    for (const auto& d : decays) {
      if (d.upper == level) total += d.rate;
    }
    return total;
  }
};

int int_pow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

RealEmbedding::RealEmbedding(int matrix_dim)
    : matrix_dim_(matrix_dim),
      coherence_index_(static_cast<std::size_t>(matrix_dim) * matrix_dim, -1) {
  int next = 0;
  for (int a = 0; a < matrix_dim; ++a) {
    for (int b = a + 1; b < matrix_dim; ++b) {
      coherence_index_[static_cast<std::size_t>(a) * matrix_dim + b] = next;
      coherence_index_[static_cast<std::size_t>(b) * matrix_dim + a] = next;
      ++next;
    }
  }
}

int RealEmbedding::real_slot(int a, int b) const noexcept {
  return 2 * coherence_index_[static_cast<std::size_t>(a) * matrix_dim_ + b];
}

void GeneratorMatrix::apply(std::span<const double> v, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& t : entries) out[t.row] += t.value * v[t.col];
}

double GeneratorMatrix::norm_inf() const {
  std::vector<double> rows(static_cast<std::size_t>(dim()), 0.0);
  for (const auto& t : entries) rows[t.row] += std::abs(t.value);
  return rows.empty() ? 0.0 : *std::max_element(rows.begin(), rows.end());
}

std::vector<double> GeneratorMatrix::population_column_sums() const {
  std::vector<double> sums(static_cast<std::size_t>(dim()), 0.0);
  const int pop = embedding.population_begin();
  for (const auto& t : entries) {
    if (t.row >= pop) sums[t.col] += t.value;
  }
  return sums;
}

std::vector<double> GeneratorMatrix::dense() const {
  const auto n = static_cast<std::size_t>(dim());
  std::vector<double> out(n * n, 0.0);
  for (const auto& t : entries) out[t.row * n + t.col] += t.value;
  return out;
}

GeneratorBuilder::GeneratorBuilder(const DriveParams& params, int atoms)
    : params_(params), atoms_(atoms) {
  params_.validate();
  if (atoms < 1) throw ValidationError("generator needs at least one atom");
  if (atoms > kMaxAtoms) {
    throw SizeLimitError("exact generators are limited to " + std::to_string(kMaxAtoms) +
                         " atoms, got " + std::to_string(atoms));
  }
  const AtomModel model(params_);
  levels_ = model.levels;
  configs_ = int_pow(levels_, atoms_);
  pair_count_ = atoms_ * (atoms_ - 1) / 2;
  matrix_.embedding = RealEmbedding(configs_);
  const RealEmbedding& emb = matrix_.embedding;

  std::vector<int> stride(static_cast<std::size_t>(atoms_));
  for (int a = 0; a < atoms_; ++a) stride[a] = int_pow(levels_, atoms_ - 1 - a);

  // Off-diagonal Hamiltonian as adjacency lists.
  std::vector<std::vector<std::pair<int, double>>> hamiltonian(
      static_cast<std::size_t>(configs_));
  std::vector<double> decay_out(static_cast<std::size_t>(configs_), 0.0);
  for (int c = 0; c < configs_; ++c) {
    for (int a = 0; a < atoms_; ++a) {
      const int l = level_of(c, a);
      decay_out[c] += model.decay_out(l);
      for (const auto& d : model.drives) {
        if (d.rate == 0.0) continue;
        if (l == d.lower) {
          hamiltonian[c].emplace_back(c + stride[a] * (d.upper - d.lower), d.rate);
        } else if (l == d.upper) {
          hamiltonian[c].emplace_back(c - stride[a] * (d.upper - d.lower), d.rate);
        }
      }
    }
  }

  std::vector<RawEntry> raw;
  raw.reserve(static_cast<std::size_t>(emb.size()) * 12);

  auto add_term = [&](int c, int d, Complex coef, int e, int f) {
    // Contribution coef * rho_ef to d/dt rho_cd, with c <= d.
    const bool diag_row = (c == d);
    const int row_re = diag_row ? emb.population_slot(c) : emb.real_slot(c, d);
    const int row_im = row_re + 1;
    if (e == f) {
      const int col = emb.population_slot(e);
      raw.push_back({row_re, col, coef.real(), false});
      if (!diag_row) raw.push_back({row_im, col, coef.imag(), false});
      return;
    }
    const int xs = emb.real_slot(e, f);
    const int ys = xs + 1;
    const double sign = (e < f) ? 1.0 : -1.0;  // rho_ef = x + sign * i y
    raw.push_back({row_re, xs, coef.real(), false});
    raw.push_back({row_re, ys, -sign * coef.imag(), false});
    if (!diag_row) {
      raw.push_back({row_im, xs, coef.imag(), false});
      raw.push_back({row_im, ys, sign * coef.real(), false});
    }
  };

  const Complex i_unit(0.0, 1.0);
  for (int c = 0; c < configs_; ++c) {
    for (int d = c; d < configs_; ++d) {
      for (const auto& [e, h] : hamiltonian[c]) add_term(c, d, -i_unit * h, e, d);
      for (const auto& [e, h] : hamiltonian[d]) add_term(c, d, i_unit * h, c, e);

      double damping = 0.5 * (decay_out[c] + decay_out[d]);
      for (int a = 0; a < atoms_; ++a) {
        const int lc = level_of(c, a);
        const int ld = level_of(d, a);
        damping += model.dephasing[static_cast<std::size_t>(lc) * levels_ + ld];
        if (lc != ld) continue;
        for (const auto& decay : model.decays) {
          if (decay.rate == 0.0 || lc != decay.lower) continue;
          const int shift = stride[a] * (decay.upper - decay.lower);
          add_term(c, d, Complex(decay.rate, 0.0), c + shift, d + shift);
        }
      }
      if (damping != 0.0) add_term(c, d, Complex(-damping, 0.0), c, d);

      if (c != d) {
        const int xs = emb.real_slot(c, d);
        raw.push_back({xs, xs + 1, 0.0, true});
        raw.push_back({xs + 1, xs, 0.0, true});
      }
    }
  }

  std::sort(raw.begin(), raw.end(), [](const RawEntry& l, const RawEntry& r) {
    return l.col != r.col ? l.col < r.col : l.row < r.row;
  });
  std::vector<RawEntry> merged;
  merged.reserve(raw.size());
  for (const auto& e : raw) {
    if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col) {
      merged.back().value += e.value;
      merged.back().keep = merged.back().keep || e.keep;
    } else {
      merged.push_back(e);
    }
  }

  matrix_.entries.clear();
  std::vector<int> position(static_cast<std::size_t>(emb.size()) * 2, -1);
  for (const auto& e : merged) {
    if (e.value == 0.0 && !e.keep) continue;
    if (e.keep) {
      // Keyed by the real slot of the coherence: (x, y) -> 2*x, (y, x) -> 2*y+1.
      const int key = e.row < e.col ? 2 * e.row : 2 * e.col + 1;
      position[key] = static_cast<int>(matrix_.entries.size());
    }
    matrix_.entries.push_back({e.row, e.col, e.value});
  }
  static_values_.resize(matrix_.entries.size());
  for (std::size_t k = 0; k < matrix_.entries.size(); ++k) {
    static_values_[k] = matrix_.entries[k].value;
  }

  const int top = model.top;
  for (int c = 0; c < configs_; ++c) {
    for (int d = c + 1; d < configs_; ++d) {
      const int xs = emb.real_slot(c, d);
      EnergySlot slot{position[2 * xs], position[2 * xs + 1],
                      static_cast<int>(coefficients_.size())};
      // E_c = -sum_a delta_a [a top] + sum_{a<b} V_ab [a and b top]
      for (int a = 0; a < atoms_; ++a) {
        const int tc = level_of(c, a) == top;
        const int td = level_of(d, a) == top;
        coefficients_.push_back(static_cast<signed char>(-(tc - td)));
      }
      for (int a = 0; a < atoms_; ++a) {
        for (int b = a + 1; b < atoms_; ++b) {
          const int tc = level_of(c, a) == top && level_of(c, b) == top;
          const int td = level_of(d, a) == top && level_of(d, b) == top;
          coefficients_.push_back(static_cast<signed char>(tc - td));
        }
      }
      energy_slots_.push_back(slot);
    }
  }
}

int GeneratorBuilder::level_of(int config, int atom) const noexcept {
  int c = config;
  for (int a = atoms_ - 1; a > atom; --a) c /= levels_;
  return c % levels_;
}

const GeneratorMatrix& GeneratorBuilder::build(std::span<const double> detunings,
                                               std::span<const double> couplings) {
  if (detunings.size() != static_cast<std::size_t>(atoms_)) {
    throw ValidationError("expected " + std::to_string(atoms_) + " detunings");
  }
  if (couplings.size() != static_cast<std::size_t>(pair_count_)) {
    throw ValidationError("expected " + std::to_string(pair_count_) + " couplings");
  }
  for (double x : detunings) {
    if (!std::isfinite(x)) throw ValidationError("effective detuning is not finite");
  }
  for (double x : couplings) {
    if (!std::isfinite(x)) throw ValidationError("pair coupling is not finite");
  }
  auto& entries = matrix_.entries;
  for (std::size_t k = 0; k < entries.size(); ++k) entries[k].value = static_values_[k];
  for (const auto& slot : energy_slots_) {
    const signed char* coef = coefficients_.data() + slot.coeff_begin;
    double omega = 0.0;
    for (int a = 0; a < atoms_; ++a) {
      if (coef[a] != 0) omega += coef[a] * detunings[a];
    }
    for (int p = 0; p < pair_count_; ++p) {
      if (coef[atoms_ + p] != 0) omega += coef[atoms_ + p] * couplings[p];
    }
    entries[slot.coherence_row_real].value = omega;
    entries[slot.coherence_row_imag].value = -omega;
  }
  return matrix_;
}

GeneratorMatrix build_single_generator(const DriveParams& params, double delta_eff) {
  GeneratorBuilder builder(params, 1);
  const double det[] = {delta_eff};
  return builder.build(det, {});
}

GeneratorMatrix build_pair_generator(const DriveParams& params, double delta_eff_1,
                                     double delta_eff_2, double v12) {
  GeneratorBuilder builder(params, 2);
  const double det[] = {delta_eff_1, delta_eff_2};
  const double v[] = {v12};
  return builder.build(det, v);
}

GeneratorMatrix build_exact_generator(const DriveParams& params,
                                      std::span<const double> couplings, int n) {
  if (n > GeneratorBuilder::kMaxAtoms) {
    throw SizeLimitError("exact generators are limited to " +
                         std::to_string(GeneratorBuilder::kMaxAtoms) + " atoms, got " +
                         std::to_string(n));
  }
  if (n < 1) throw ValidationError("exact generator needs at least one atom");
  if (couplings.size() != static_cast<std::size_t>(n) * n) {
    throw ValidationError("coupling matrix must be n x n");
  }
  GeneratorBuilder builder(params, n);
  std::vector<double> det(static_cast<std::size_t>(n), params.delta);
  std::vector<double> upper;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double vab = couplings[static_cast<std::size_t>(a) * n + b];
      const double vba = couplings[static_cast<std::size_t>(b) * n + a];
      if (std::abs(vab - vba) > 1e-12 * std::max(1.0, std::abs(vab))) {
        throw ValidationError("coupling matrix must be symmetric");
      }
      upper.push_back(vab);
    }
  }
  return builder.build(det, upper);
}

}  // namespace rydhm
