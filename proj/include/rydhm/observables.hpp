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

// Merge-able snapshot statistics: Rydberg fraction, distance-binned pair
// statistics and the excitation-count histogram.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rydhm/engine.hpp"
#include "rydhm/geometry.hpp"

namespace rydhm {

/// Uniform distance bins [offset + k w, offset + (k+1) w), k < count, plus
/// one overflow bin for everything outside.
struct BinSpec {
  double width = 0.1;
  double offset = 0.0;
  std::size_t count = 100;

  /// Gas bins of the given width covering (0, r_max].
  static BinSpec uniform(double width, double r_max);
  /// Bins centred on multiples k a (k = 1..max_order) of a lattice constant.
  static BinSpec lattice(double a, std::size_t max_order);

  void validate() const;
  [[nodiscard]] std::size_t bin_of(double r) const noexcept;  // count == overflow
  [[nodiscard]] double center(std::size_t bin) const noexcept {
    return offset + (static_cast<double>(bin) + 0.5) * width;
  }
  friend bool operator==(const BinSpec&, const BinSpec&) = default;
};

/// Geometric pair counts per bin for one set of positions.
struct PairHistogram {
  std::vector<std::uint64_t> counts;  // count + 1 entries, last is overflow

  static PairHistogram build(std::span<const Position> positions, const BinSpec& bins);
};

struct BinValue {
  double center = 0.0;
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t pair_count = 0;  // summed over snapshots
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

class ObservableAccumulator {
 public:
  ObservableAccumulator() = default;
  ObservableAccumulator(std::size_t atoms, BinSpec bins);

  /// Adds one snapshot. Pair counts come from the positions.
  void accumulate(const MicroState& state, std::span<const Position> positions);
  /// Same, with precomputed geometric pair counts for these positions.
  void accumulate(const MicroState& state, std::span<const Position> positions,
                  const PairHistogram& geometry);

  /// Fieldwise sum; throws ValidationError on mismatched atom count or bins.
  void merge(const ObservableAccumulator& other);

  [[nodiscard]] std::size_t atoms() const noexcept { return atoms_; }
  [[nodiscard]] const BinSpec& bins() const noexcept { return bins_; }
  [[nodiscard]] std::uint64_t snapshots() const noexcept { return snapshots_; }
  [[nodiscard]] std::uint64_t sum_rydberg() const noexcept { return sum_nr_; }
  [[nodiscard]] std::uint64_t sum_rydberg_squared() const noexcept { return sum_nr2_; }
  [[nodiscard]] const std::vector<std::uint64_t>& rydberg_histogram() const noexcept {
    return nr_histogram_;
  }
  [[nodiscard]] const std::vector<std::uint64_t>& per_atom_rydberg() const noexcept {
    return per_atom_;
  }
  [[nodiscard]] const std::vector<std::uint64_t>& bin_pairs() const noexcept { return bin_pairs_; }
  [[nodiscard]] const std::vector<std::uint64_t>& bin_double() const noexcept { return bin_double_; }
  [[nodiscard]] const std::vector<std::uint64_t>& bin_double_squared() const noexcept {
    return bin_double_sq_;
  }

  /// Raw snapshot data for synthetic accumulators in tests.
  void add_raw_snapshot(std::span<const std::uint64_t> per_atom_indicator,
                        std::span<const std::uint64_t> pairs_per_bin,
                        std::span<const std::uint64_t> doubles_per_bin);

  friend bool operator==(const ObservableAccumulator&, const ObservableAccumulator&) = default;

 private:
  void add_counts(std::uint64_t nr);

  std::size_t atoms_ = 0;
  BinSpec bins_;
  std::uint64_t snapshots_ = 0;
  std::uint64_t sum_nr_ = 0;
  std::uint64_t sum_nr2_ = 0;
  std::vector<std::uint64_t> nr_histogram_;
  std::vector<std::uint64_t> per_atom_;
  std::vector<std::uint64_t> bin_pairs_;
  std::vector<std::uint64_t> bin_double_;
  std::vector<std::uint64_t> bin_double_sq_;
};

/// Mean Rydberg population per atom, with the standard error over snapshots.
Estimate rydberg_fraction(const ObservableAccumulator& acc);

/// g2 per bin: (double excitations per pair) / rho33^2; bins without pairs
/// and the overflow bin are omitted.
std::vector<BinValue> pair_correlation(const ObservableAccumulator& acc);

/// Probability that both atoms of a pair at distance r are excited.
std::vector<BinValue> pair_excitation_probability(const ObservableAccumulator& acc);

/// (<N_R^2> - <N_R>^2) / <N_R> - 1 from the streamed moments, with a
/// delta-method standard error from the count histogram.
Estimate mandel_q(const ObservableAccumulator& acc);

/// The same quantity computed from the N_R histogram alone.
double mandel_q_from_histogram(std::span<const std::uint64_t> histogram);

ObservableAccumulator merge(const ObservableAccumulator& a, const ObservableAccumulator& b);

}  // namespace rydhm
