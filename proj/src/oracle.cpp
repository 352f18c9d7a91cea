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

#include "rydhm/oracle.hpp"

#include <cmath>
#include <string>

#include "rydhm/error.hpp"
#include "rydhm/liouvillian.hpp"
#include "rydhm/rng.hpp"
#include "rydhm/steady.hpp"

namespace rydhm {

namespace {

int int_pow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

int digit(int config, int atom, int atoms, int levels) {
  for (int a = atoms - 1; a > atom; --a) config /= levels;
  return config % levels;
}

FewAtomDistribution from_joint(std::vector<double> joint, int n, int levels) {
  FewAtomDistribution out;
  out.atoms = n;
  out.levels = levels;
  out.joint = std::move(joint);
  out.per_atom_rydberg.assign(static_cast<std::size_t>(n), 0.0);
  const int top = levels - 1;
  for (int c = 0; c < static_cast<int>(out.joint.size()); ++c) {
    for (int a = 0; a < n; ++a) {
      if (digit(c, a, n, levels) == top) out.per_atom_rydberg[a] += out.joint[c];
    }
  }
  return out;
}

// Atoms on a line 1 um apart with every coupling given explicitly.
InteractionSpec explicit_couplings(std::span<const double> couplings, int n,
                                   std::vector<Position>& positions) {
  if (couplings.size() != static_cast<std::size_t>(n) * n) {
    throw ValidationError("coupling matrix must be n x n");
  }
  InteractionSpec spec(0.0);
  positions.assign(static_cast<std::size_t>(n), Position{});
  for (int a = 0; a < n; ++a) {
    positions[a].x = static_cast<double>(a);
    for (int b = a + 1; b < n; ++b) {
      spec.set_override(static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                        couplings[static_cast<std::size_t>(a) * n + b]);
    }
  }
  return spec;
}

}  // namespace

double FewAtomDistribution::rydberg_fraction() const {
  double s = 0.0;
  for (double p : per_atom_rydberg) s += p;
  return s / static_cast<double>(atoms);
}

double FewAtomDistribution::probability_at_least_rydberg(int k) const {
  double total = 0.0;
  const int top = levels - 1;
  for (int c = 0; c < static_cast<int>(joint.size()); ++c) {
    int count = 0;
    for (int a = 0; a < atoms; ++a) count += digit(c, a, atoms, levels) == top;
    if (count >= k) total += joint[c];
  }
  return total;
}

FewAtomDistribution exact_steady_state(const DriveParams& params,
                                       std::span<const double> couplings, int n) {
  const GeneratorMatrix m = build_exact_generator(params, couplings, n);
  SteadyState ss = steady_state(m);
  return from_joint(std::move(ss.populations), n, params.levels());
}

FewAtomDistribution chain_steady_state(const DriveParams& params,
                                       std::span<const double> couplings, int n,
                                       const PairPartition& partition) {
  if (n < 1 || n > 6) throw SizeLimitError("chain evaluation supports 1..6 atoms");
  std::vector<Position> positions;
  InteractionSpec spec = explicit_couplings(couplings, n, positions);
  HybridSampler sampler(params, spec, positions, partition);
  const int levels = params.levels();
  const int configs = int_pow(levels, n);
  const std::size_t units = sampler.unit_count();
  if (units == 0) throw ValidationError("partition has no units");

  // Column-stochastic rate matrix G = P^T - I over joint configurations.
  std::vector<double> g(static_cast<std::size_t>(configs) * configs, 0.0);
  MicroState state = MicroState::ground(static_cast<std::size_t>(n), params.scheme);
  std::array<double, 9> dist{};
  const double w = 1.0 / static_cast<double>(units);
  for (int c = 0; c < configs; ++c) {
    for (int a = 0; a < n; ++a) {
      state.labels[a] = label_of_level(params.scheme, digit(c, a, n, levels));
    }
    for (std::size_t k = 0; k < units; ++k) {
      const Unit u = sampler.unit(k);
      sampler.unit_distribution(u, state, dist);
      const int stride1 = int_pow(levels, n - 1 - static_cast<int>(u.first));
      const int base1 = c - digit(c, static_cast<int>(u.first), n, levels) * stride1;
      if (u.is_pair()) {
        const int stride2 = int_pow(levels, n - 1 - static_cast<int>(u.second));
        const int base = base1 - digit(c, static_cast<int>(u.second), n, levels) * stride2;
        for (int l1 = 0; l1 < levels; ++l1) {
          for (int l2 = 0; l2 < levels; ++l2) {
            const int target = base + l1 * stride1 + l2 * stride2;
            g[static_cast<std::size_t>(target) * configs + c] += w * dist[l1 * levels + l2];
          }
        }
      } else {
        for (int l = 0; l < levels; ++l) {
          const int target = base1 + l * stride1;
          g[static_cast<std::size_t>(target) * configs + c] += w * dist[l];
        }
      }
    }
    g[static_cast<std::size_t>(c) * configs + c] -= 1.0;
  }
  std::vector<Triplet> entries;
  for (int col = 0; col < configs; ++col) {
    for (int row = 0; row < configs; ++row) {
      const double v = g[static_cast<std::size_t>(row) * configs + col];
      if (v != 0.0) entries.push_back({row, col, v});
    }
  }
  SteadySolver solver;
  return from_joint(solver.null_vector(configs, entries, 0), n, levels);
}

FewAtomDistribution sampled_steady_state(const DriveParams& params,
                                         std::span<const double> couplings, int n,
                                         const PairPartition& partition, const McConfig& mc) {
  mc.validate();
  std::vector<Position> positions;
  InteractionSpec spec = explicit_couplings(couplings, n, positions);
  HybridSampler sampler(params, spec, positions, partition, mc.memoize);
  const int levels = params.levels();
  std::vector<double> joint(static_cast<std::size_t>(int_pow(levels, n)), 0.0);
  std::uint64_t samples = 0;
  for (std::size_t t = 0; t < mc.trajectories; ++t) {
    sampler.run_trajectory(mc, derive_seed(mc.seed, 0, t, StreamKind::trajectory),
                           [&](const MicroState& s) {
                             int c = 0;
                             for (int a = 0; a < n; ++a) {
                               c = c * levels + level_index(params.scheme, s.labels[a]);
                             }
                             joint[c] += 1.0;
                             ++samples;
                           });
  }
  for (auto& p : joint) p /= static_cast<double>(samples);
  return from_joint(std::move(joint), n, levels);
}

std::string_view to_string(ThreeAtomModel model) {
  switch (model) {
    case ThreeAtomModel::singles:
      return "singles";
    case ThreeAtomModel::overlapping_pairs:
      return "overlapping_pairs";
    case ThreeAtomModel::pair_plus_single:
      return "pair_plus_single";
  }
  return "?";
}

PairPartition three_atom_partition(ThreeAtomModel model) {
  PairPartition p;
  switch (model) {
    case ThreeAtomModel::singles:
      p = singles_partition(3);
      break;
    case ThreeAtomModel::overlapping_pairs:
      p.mode = PairingMode::overlapping;
      p.pairs = {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}};
      break;
    case ThreeAtomModel::pair_plus_single:
      p.pairs = {{0, 1, 1.0}};
      p.singles = {2};
      break;
  }
  return p;
}

std::array<double, 9> three_atom_couplings(double v12, double v) {
  return {0.0, v12, v, v12, 0.0, v, v, v, 0.0};
}

ThreeAtomModel DeviationMap::best_model(const DeviationPoint& p) {
  int best = 0;
  for (int m = 1; m < 3; ++m) {
    if (p.deviation[m] < p.deviation[best]) best = m;
  }
  return static_cast<ThreeAtomModel>(best);
}

std::vector<double> default_coupling_grid() {
  std::vector<double> out(30);
  for (int k = 0; k < 30; ++k) out[k] = std::pow(10.0, -2.0 + 3.0 * k / 29.0);
  return out;
}

DeviationMap deviation_map(const DriveParams& params, std::span<const double> deltas,
                           std::span<const double> vs, const DeviationOptions& options) {
  DeviationMap map;
  map.v12 = options.v12;
  map.deltas.assign(deltas.begin(), deltas.end());
  map.vs.assign(vs.begin(), vs.end());
  const ThreeAtomModel models[] = {ThreeAtomModel::singles, ThreeAtomModel::overlapping_pairs,
                                   ThreeAtomModel::pair_plus_single};
  for (double delta : deltas) {
    DriveParams p = params;
    p.delta = delta;
    for (double v : vs) {
      const auto couplings = three_atom_couplings(options.v12, v);
      DeviationPoint point;
      point.delta = delta;
      point.v = v;
      point.exact = exact_steady_state(p, couplings, 3).rydberg_fraction();
      if (!(point.exact > 0.0)) continue;
      for (int m = 0; m < 3; ++m) {
        const PairPartition part = three_atom_partition(models[m]);
        const FewAtomDistribution d =
            options.evaluation == ModelEvaluation::chain
                ? chain_steady_state(p, couplings, 3, part)
                : sampled_steady_state(p, couplings, 3, part, options.mc);
        point.model[m] = d.rydberg_fraction();
        point.deviation[m] = std::abs(point.model[m] - point.exact) / point.exact;
      }
      map.points.push_back(point);
    }
  }
  return map;
}

}  // namespace rydhm
