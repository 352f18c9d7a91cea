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

#include "rydhm/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rydhm/error.hpp"

namespace rydhm {

BinSpec BinSpec::uniform(double width, double r_max) {
  if (!(width > 0.0) || !(r_max > 0.0)) {
    throw ValidationError("bin width and range must be positive");
  }
  BinSpec b;
  b.width = width;
  b.offset = 0.0;
  b.count = static_cast<std::size_t>(std::ceil(r_max / width - 1e-9));
  b.validate();
  return b;
}

BinSpec BinSpec::lattice(double a, std::size_t max_order) {
  BinSpec b;
  b.width = a;
  b.offset = 0.5 * a;
  b.count = max_order;
  b.validate();
  return b;
}

void BinSpec::validate() const {
  if (!(width > 0.0) || !std::isfinite(offset) || offset < 0.0 || count < 1) {
    throw ValidationError("invalid bin specification");
  }
}

std::size_t BinSpec::bin_of(double r) const noexcept {
  const double x = (r - offset) / width;
  if (!(x >= 0.0) || x >= static_cast<double>(count)) return count;
  return static_cast<std::size_t>(x);
}

PairHistogram PairHistogram::build(std::span<const Position> positions, const BinSpec& bins) {
  PairHistogram h;
  h.counts.assign(bins.count + 1, 0);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      ++h.counts[bins.bin_of(distance(positions[i], positions[j]))];
    }
  }
  return h;
}

ObservableAccumulator::ObservableAccumulator(std::size_t atoms, BinSpec bins)
    : atoms_(atoms),
      bins_(bins),
      nr_histogram_(atoms + 1, 0),
      per_atom_(atoms, 0),
      bin_pairs_(bins.count + 1, 0),
      bin_double_(bins.count + 1, 0),
      bin_double_sq_(bins.count + 1, 0) {
  bins_.validate();
  if (atoms < 1) throw ValidationError("accumulator needs at least one atom");
}

void ObservableAccumulator::add_counts(std::uint64_t nr) {
  ++snapshots_;
  sum_nr_ += nr;
  sum_nr2_ += nr * nr;
  ++nr_histogram_[nr];
}

void ObservableAccumulator::accumulate(const MicroState& state,
                                       std::span<const Position> positions) {
  accumulate(state, positions, PairHistogram::build(positions, bins_));
}

void ObservableAccumulator::accumulate(const MicroState& state,
                                       std::span<const Position> positions,
                                       const PairHistogram& geometry) {
  if (state.size() != atoms_ || positions.size() != atoms_) {
    throw ValidationError("snapshot atom count does not match the accumulator");
  }
  if (geometry.counts.size() != bins_.count + 1) {
    throw ValidationError("pair histogram does not match the accumulator bins");
  }
  std::uint64_t nr = 0;
  std::vector<std::size_t> excited;
  excited.reserve(64);
  for (std::size_t i = 0; i < atoms_; ++i) {
    if (state.labels[i] == kRydberg) {
      ++per_atom_[i];
      ++nr;
      excited.push_back(i);
    }
  }
  add_counts(nr);
  for (std::size_t b = 0; b <= bins_.count; ++b) bin_pairs_[b] += geometry.counts[b];

  std::vector<std::uint64_t> scratch(bins_.count + 1, 0);
  for (std::size_t a = 0; a < excited.size(); ++a) {
    for (std::size_t b = a + 1; b < excited.size(); ++b) {
      ++scratch[bins_.bin_of(distance(positions[excited[a]], positions[excited[b]]))];
    }
  }
  for (std::size_t b = 0; b <= bins_.count; ++b) {
    bin_double_[b] += scratch[b];
    bin_double_sq_[b] += scratch[b] * scratch[b];
  }
}

void ObservableAccumulator::add_raw_snapshot(std::span<const std::uint64_t> per_atom_indicator,
                                             std::span<const std::uint64_t> pairs_per_bin,
                                             std::span<const std::uint64_t> doubles_per_bin) {
  if (per_atom_indicator.size() != atoms_ || pairs_per_bin.size() != bins_.count + 1 ||
      doubles_per_bin.size() != bins_.count + 1) {
    throw ValidationError("raw snapshot shape does not match the accumulator");
  }
  std::uint64_t nr = 0;
  for (std::size_t i = 0; i < atoms_; ++i) {
    per_atom_[i] += per_atom_indicator[i];
    nr += per_atom_indicator[i];
  }
  add_counts(nr);
  for (std::size_t b = 0; b <= bins_.count; ++b) {
    bin_pairs_[b] += pairs_per_bin[b];
    bin_double_[b] += doubles_per_bin[b];
    bin_double_sq_[b] += doubles_per_bin[b] * doubles_per_bin[b];
  }
}

void ObservableAccumulator::merge(const ObservableAccumulator& other) {
  if (other.atoms_ == 0 && other.snapshots_ == 0) return;
  if (atoms_ == 0 && snapshots_ == 0) {
    *this = other;
    return;
  }
  if (other.atoms_ != atoms_ || !(other.bins_ == bins_)) {
    throw ValidationError("cannot merge accumulators with different atoms or bins");
  }
  snapshots_ += other.snapshots_;
  sum_nr_ += other.sum_nr_;
  sum_nr2_ += other.sum_nr2_;
  auto add = [](std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  };
  add(nr_histogram_, other.nr_histogram_);
  add(per_atom_, other.per_atom_);
  add(bin_pairs_, other.bin_pairs_);
  add(bin_double_, other.bin_double_);
  add(bin_double_sq_, other.bin_double_sq_);
}

ObservableAccumulator merge(const ObservableAccumulator& a, const ObservableAccumulator& b) {
  ObservableAccumulator out = a;
  out.merge(b);
  return out;
}

Estimate rydberg_fraction(const ObservableAccumulator& acc) {
  if (acc.snapshots() == 0) throw UndefinedObservableError("empty accumulator");
  std::uint64_t total = 0;
  for (auto v : acc.per_atom_rydberg()) total += v;
  const double s = static_cast<double>(acc.snapshots());
  const double n = static_cast<double>(acc.atoms());
  Estimate e;
  e.value = static_cast<double>(total) / (n * s);
  if (acc.snapshots() > 1) {
    const double m1 = static_cast<double>(acc.sum_rydberg()) / s;
    const double m2 = static_cast<double>(acc.sum_rydberg_squared()) / s;
    const double var = std::max(0.0, m2 - m1 * m1) * s / (s - 1.0);
    e.std_error = std::sqrt(var / s) / n;
  }
  return e;
}

namespace {

std::vector<BinValue> per_pair_probability(const ObservableAccumulator& acc, double scale) {
  const BinSpec& bins = acc.bins();
  const double s = static_cast<double>(acc.snapshots());
  std::vector<BinValue> out;
  for (std::size_t b = 0; b < bins.count; ++b) {
    const std::uint64_t pairs = acc.bin_pairs()[b];
    if (pairs == 0) continue;
    const double dbl = static_cast<double>(acc.bin_double()[b]);
    const double p = dbl / static_cast<double>(pairs);
    double se = 0.0;
    if (acc.snapshots() > 1) {
      const double mean = dbl / s;
      const double var = std::max(0.0, static_cast<double>(acc.bin_double_squared()[b]) / s -
                                           mean * mean) *
                         s / (s - 1.0);
      se = std::sqrt(var / s) * s / static_cast<double>(pairs);
    }
    out.push_back({bins.center(b), p * scale, se * scale, pairs});
  }
  return out;
}

}  // namespace

std::vector<BinValue> pair_correlation(const ObservableAccumulator& acc) {
  const double rho = rydberg_fraction(acc).value;
  if (!(rho > 0.0)) {
    throw UndefinedObservableError("pair correlation is undefined for zero Rydberg fraction");
  }
  return per_pair_probability(acc, 1.0 / (rho * rho));
}

std::vector<BinValue> pair_excitation_probability(const ObservableAccumulator& acc) {
  if (acc.snapshots() == 0) throw UndefinedObservableError("empty accumulator");
  return per_pair_probability(acc, 1.0);
}

Estimate mandel_q(const ObservableAccumulator& acc) {
  if (acc.snapshots() < 2) {
    throw UndefinedObservableError("Mandel Q needs at least two snapshots");
  }
  const double s = static_cast<double>(acc.snapshots());
  const double m1 = static_cast<double>(acc.sum_rydberg()) / s;
  if (!(m1 > 0.0)) throw UndefinedObservableError("Mandel Q is undefined for <N_R> = 0");
  const double m2 = static_cast<double>(acc.sum_rydberg_squared()) / s;
  Estimate e;
  e.value = (m2 - m1 * m1) / m1 - 1.0;

  double m3 = 0.0;
  double m4 = 0.0;
  const auto& hist = acc.rydberg_histogram();
  for (std::size_t k = 0; k < hist.size(); ++k) {
    const double w = static_cast<double>(hist[k]) / s;
    const double x = static_cast<double>(k);
    m3 += w * x * x * x;
    m4 += w * x * x * x * x;
  }
  const double var1 = m2 - m1 * m1;
  const double var2 = m4 - m2 * m2;
  const double cov12 = m3 - m1 * m2;
  const double g1 = -(m2 + m1 * m1) / (m1 * m1);
  const double g2 = 1.0 / m1;
  const double var_q = (g1 * g1 * var1 + 2.0 * g1 * g2 * cov12 + g2 * g2 * var2) / (s - 1.0);
  e.std_error = std::sqrt(std::max(0.0, var_q));
  return e;
}

double mandel_q_from_histogram(std::span<const std::uint64_t> histogram) {
  double s = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < histogram.size(); ++k) {
    const double w = static_cast<double>(histogram[k]);
    const double x = static_cast<double>(k);
    s += w;
    m1 += w * x;
    m2 += w * x * x;
  }
  if (s < 2.0) throw UndefinedObservableError("Mandel Q needs at least two snapshots");
  m1 /= s;
  m2 /= s;
  if (!(m1 > 0.0)) throw UndefinedObservableError("Mandel Q is undefined for <N_R> = 0");
  return (m2 - m1 * m1) / m1 - 1.0;
}

}  // namespace rydhm
