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

#include "rydhm/engine.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "rydhm/error.hpp"

namespace rydhm {

MicroState MicroState::ground(std::size_t atoms, LevelScheme scheme) {
  return MicroState{scheme, std::vector<Label>(atoms, kGround)};
}

std::size_t MicroState::rydberg_count() const noexcept {
  std::size_t n = 0;
  for (Label l : labels) n += (l == kRydberg);
  return n;
}

void MicroState::validate() const {
  for (Label l : labels) (void)level_index(scheme, l);
}

void McConfig::validate() const {
  if (steps_per_atom < 1 || samples_per_trajectory < 1 || trajectories < 1 ||
      realizations < 1) {
    throw ValidationError("Monte Carlo counts must all be >= 1");
  }
}

double effective_detuning(std::size_t atom, const MicroState& state,
                          std::span<const Position> positions, const InteractionSpec& spec,
                          double delta, std::optional<std::size_t> exclude) {
  if (atom >= state.size() || positions.size() != state.size()) {
    throw ValidationError("atom index or position count does not match the state");
  }
  if (exclude && *exclude == atom) {
    throw ValidationError("effective detuning: excluded partner equals the atom");
  }
  double out = delta;
  for (std::size_t j = 0; j < state.size(); ++j) {
    if (state.labels[j] != kRydberg || j == atom || (exclude && j == *exclude)) continue;
    out -= spec.coupling_from_squared(atom, j, squared_distance(positions[atom], positions[j]));
  }
  return out;
}

Unit select_unit(const PairPartition& partition, Rng& rng) {
  const std::size_t units = partition.unit_count();
  if (units == 0) throw ValidationError("cannot select a unit from an empty ensemble");
  const std::size_t k = rng.index(units);
  if (k < partition.pairs.size()) {
    return {partition.pairs[k].first, partition.pairs[k].second};
  }
  return {partition.singles[k - partition.pairs.size()], kNoPartner};
}

std::size_t sample_state(std::span<const double> probabilities, double r) {
  if (probabilities.empty()) throw ValidationError("empty distribution");
  double sum = 0.0;
  std::size_t first_nonzero = probabilities.size();
  for (std::size_t l = 0; l < probabilities.size(); ++l) {
    const double p = probabilities[l];
    if (!(p >= 0.0)) throw ValidationError("distribution has a negative entry");
    if (p > 0.0 && first_nonzero == probabilities.size()) first_nonzero = l;
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError("distribution sums to " + std::to_string(sum));
  }
  std::size_t chosen = first_nonzero;
  double cumulative = 0.0;
  for (std::size_t l = 0; l < probabilities.size(); ++l) {
    if (probabilities[l] > 0.0 && cumulative < r) chosen = l;
    cumulative += probabilities[l];
  }
  return chosen;
}

void PropagationMatrix::apply(std::span<const double> rho, std::span<double> out) const {
  for (int a = 0; a < dim; ++a) {
    double acc = 0.0;
    for (int b = 0; b < dim; ++b) acc += (*this)(a, b) * rho[b];
    out[a] = acc;
  }
}

PropagationMatrix build_propagation_matrix(std::span<const double> sigma) {
  const std::size_t n = sigma.size();
  if (n != 2 && n != 3 && n != 4 && n != 9) {
    throw ValidationError("propagation matrix needs a single (2, 3) or pair (4, 9) distribution");
  }
  double sum = 0.0;
  for (double s : sigma) {
    if (!(s >= 0.0)) throw ValidationError("steady populations must be nonnegative");
    sum += s;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("steady populations must sum to one");
  PropagationMatrix b;
  b.dim = static_cast<int>(n);
  b.values.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t c = 0; c < n; ++c) b.values[a * n + c] = sigma[a] - (a == c ? 1.0 : 0.0);
  }
  return b;
}

std::size_t HybridSampler::MemoHash::operator()(const MemoKey& k) const noexcept {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(k.d1));
  h = mix64(h ^ static_cast<std::uint64_t>(k.d2));
  h = mix64(h ^ k.v ^ (k.pair ? 0x5bd1e995ULL : 0));
  return static_cast<std::size_t>(h);
}

HybridSampler::HybridSampler(const DriveParams& params, InteractionSpec spec,
                             std::vector<Position> positions, PairPartition partition,
                             bool memoize)
    : params_(params),
      spec_(std::move(spec)),
      positions_(std::move(positions)),
      partition_(std::move(partition)),
      memoize_(memoize),
      levels_(params.levels()),
      single_builder_(params, 1),
      pair_builder_(params, 2) {
  const std::size_t n = positions_.size();
  for (const auto& p : partition_.pairs) {
    if (p.first >= n || p.second >= n || p.first == p.second) {
      throw ValidationError("partition references an invalid atom pair");
    }
    // Throws for coincident pair atoms.
    (void)spec_.coupling_from_squared(p.first, p.second,
                                      squared_distance(positions_[p.first], positions_[p.second]));
  }
  for (std::size_t s : partition_.singles) {
    if (s >= n) throw ValidationError("partition references an invalid atom");
  }
}

Unit HybridSampler::unit(std::size_t k) const {
  if (k < partition_.pairs.size()) return {partition_.pairs[k].first, partition_.pairs[k].second};
  return {partition_.singles.at(k - partition_.pairs.size()), kNoPartner};
}

double HybridSampler::quantize(double delta, std::int64_t& key) const {
  if (std::abs(delta) < 1e9) {
    key = std::llround(delta / kMemoQuantum);
    return static_cast<double>(key) * kMemoQuantum;
  }
  key = static_cast<std::int64_t>(std::bit_cast<std::uint64_t>(delta));
  return delta;
}

void HybridSampler::solve_unit(const Unit& unit, std::span<const double> detunings,
                               double coupling, std::span<double> out) {
  ++solves_;
  if (unit.is_pair()) {
    const double v[] = {coupling};
    solver_.solve_populations(pair_builder_.build(detunings, v), out);
  } else {
    solver_.solve_populations(single_builder_.build(detunings, {}), out);
  }
}

void HybridSampler::unit_distribution(const Unit& unit, const MicroState& state,
                                      std::span<double> out) {
  const std::size_t n = positions_.size();
  const std::size_t i1 = unit.first;
  const std::size_t i2 = unit.second;
  const bool pair = unit.is_pair();
  double d1 = params_.delta;
  double d2 = params_.delta;
  const Position& p1 = positions_[i1];
  for (std::size_t j = 0; j < n; ++j) {
    if (state.labels[j] != kRydberg || j == i1 || j == i2) continue;
    d1 -= spec_.coupling_from_squared(i1, j, squared_distance(p1, positions_[j]));
    if (pair) d2 -= spec_.coupling_from_squared(i2, j, squared_distance(positions_[i2], positions_[j]));
  }
  const double coupling =
      pair ? spec_.coupling_from_squared(i1, i2, squared_distance(p1, positions_[i2])) : 0.0;
  const std::size_t len = pair ? static_cast<std::size_t>(levels_ * levels_)
                               : static_cast<std::size_t>(levels_);
  if (out.size() < len) throw ValidationError("output buffer too small for unit distribution");
  if (!memoize_) {
    const double det[] = {d1, d2};
    solve_unit(unit, std::span<const double>(det, pair ? 2 : 1), coupling, out);
    return;
  }
  MemoKey key{0, 0, pair ? std::bit_cast<std::uint64_t>(coupling) : 0, pair};
  const double det[] = {quantize(d1, key.d1), pair ? quantize(d2, key.d2) : 0.0};
  if (auto it = memo_.find(key); it != memo_.end()) {
    ++memo_hits_;
    std::copy_n(it->second.begin(), len, out.begin());
    return;
  }
  std::array<double, 9> value{};
  solve_unit(unit, std::span<const double>(det, pair ? 2 : 1), coupling,
             std::span<double>(value.data(), len));
  if (memo_.size() > (1u << 20)) memo_.clear();
  memo_.emplace(key, value);
  std::copy_n(value.begin(), len, out.begin());
}

Unit HybridSampler::step(MicroState& state, Rng& rng) {
  const std::size_t units = partition_.unit_count();
  if (units == 0) throw ValidationError("cannot select a unit from an empty ensemble");
  const std::size_t k = rng.index(units);
  const Unit u = unit(k);
  std::array<double, 9> dist{};
  unit_distribution(u, state, dist);
  const double r = rng.uniform();
  const std::size_t len = u.is_pair() ? static_cast<std::size_t>(levels_ * levels_)
                                      : static_cast<std::size_t>(levels_);
  const std::size_t outcome = sample_state(std::span<const double>(dist.data(), len), r);
  if (u.is_pair()) {
    state.labels[u.first] = label_of_level(params_.scheme, static_cast<int>(outcome) / levels_);
    state.labels[u.second] = label_of_level(params_.scheme, static_cast<int>(outcome) % levels_);
  } else {
    state.labels[u.first] = label_of_level(params_.scheme, static_cast<int>(outcome));
  }
  return u;
}

void HybridSampler::run_trajectory(const McConfig& mc, std::uint64_t seed,
                                   const std::function<void(const MicroState&)>& on_sample) {
  mc.validate();
  Rng rng(seed);
  MicroState state = MicroState::ground(atoms(), params_.scheme);
  const std::size_t n = atoms();
  const std::size_t burn_in = mc.steps_per_atom * n;
  for (std::size_t t = 0; t < burn_in; ++t) step(state, rng);
  on_sample(state);
  for (std::size_t s = 1; s < mc.samples_per_trajectory; ++s) {
    for (std::size_t t = 0; t < n; ++t) step(state, rng);
    on_sample(state);
  }
}

std::vector<MicroState> HybridSampler::run_trajectory(const McConfig& mc, std::uint64_t seed) {
  std::vector<MicroState> out;
  run_trajectory(mc, seed, [&out](const MicroState& s) { out.push_back(s); });
  return out;
}

MicroState mc_step(const MicroState& state, const PairPartition& partition,
                   std::span<const Position> positions, const DriveParams& params,
                   const InteractionSpec& spec, Rng& rng) {
  if (state.size() != positions.size()) {
    throw ValidationError("state and positions disagree on the atom count");
  }
  state.validate();
  HybridSampler sampler(params, spec, {positions.begin(), positions.end()}, partition);
  MicroState next = state;
  sampler.step(next, rng);
  return next;
}

std::vector<MicroState> run_trajectory(std::span<const Position> positions,
                                       const PairPartition& partition,
                                       const DriveParams& params, const InteractionSpec& spec,
                                       const McConfig& mc, std::uint64_t seed) {
  HybridSampler sampler(params, spec, {positions.begin(), positions.end()}, partition,
                        mc.memoize);
  return sampler.run_trajectory(mc, seed);
}

}  // namespace rydhm
