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

#include "rydhm/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "rydhm/error.hpp"
#include "rydhm/rng.hpp"

namespace rydhm {

PairPartition partition_for(const PartitionSpec& spec, std::span<const Position> positions) {
  if (spec.sare || positions.size() < 2) {
    PairPartition p = singles_partition(positions.size());
    p.mode = spec.mode;
    return p;
  }
  const double upper = spec.upper ? *spec.upper : nearest_neighbor_scale(positions);
  if (!(upper > spec.lower)) {
    throw ValidationError("upper pairing bound " + std::to_string(upper) +
                          " um does not exceed the lower bound " + std::to_string(spec.lower) +
                          " um");
  }
  return build_partition(positions, spec.lower, upper, spec.mode);
}

namespace {

struct Realization {
  std::vector<Position> positions;
  PairPartition partition;
  PairHistogram histogram;
};

constexpr std::size_t kTrajectoriesPerTask = 8;

template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&](std::size_t worker) {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      try {
        fn(k, worker);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(body, w);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

EnsembleResult run_ensemble(const EnsembleSpec& spec) {
  spec.params.validate();
  spec.geometry.validate();
  spec.mc.validate();
  spec.bins.validate();
  const std::size_t n = spec.geometry.count;
  const std::size_t workers = std::max<std::size_t>(1, spec.workers);

  std::vector<Realization> realizations(spec.mc.realizations);
  parallel_for(realizations.size(), workers, [&](std::size_t r, std::size_t) {
    Rng rng(derive_seed(spec.mc.seed, r, 0, StreamKind::geometry));
    Realization& out = realizations[r];
    out.positions = sample_positions(spec.geometry, rng);
    out.partition = partition_for(spec.partition, out.positions);
    out.histogram = PairHistogram::build(out.positions, spec.bins);
  });

  const std::size_t chunks =
      (spec.mc.trajectories + kTrajectoriesPerTask - 1) / kTrajectoriesPerTask;
  const std::size_t tasks = realizations.size() * chunks;

  struct WorkerState {
    ObservableAccumulator acc;
    std::uint64_t solves = 0;
    std::uint64_t hits = 0;
  };
  std::vector<WorkerState> states(std::min(workers, std::max<std::size_t>(tasks, 1)));
  for (auto& s : states) s.acc = ObservableAccumulator(n, spec.bins);

  parallel_for(tasks, workers, [&](std::size_t task, std::size_t worker) {
    const std::size_t r = task / chunks;
    const std::size_t chunk = task % chunks;
    const Realization& real = realizations[r];
    HybridSampler sampler(spec.params, spec.interaction, real.positions, real.partition,
                          spec.mc.memoize);
    WorkerState& ws = states[worker];
    const std::size_t t_begin = chunk * kTrajectoriesPerTask;
    const std::size_t t_end = std::min(spec.mc.trajectories, t_begin + kTrajectoriesPerTask);
    for (std::size_t t = t_begin; t < t_end; ++t) {
      sampler.run_trajectory(spec.mc, derive_seed(spec.mc.seed, r, t, StreamKind::trajectory),
                             [&](const MicroState& s) {
                               ws.acc.accumulate(s, real.positions, real.histogram);
                             });
    }
    ws.solves += sampler.solves();
    ws.hits += sampler.memo_hits();
  });

  EnsembleResult result;
  result.observables = ObservableAccumulator(n, spec.bins);
  for (const auto& s : states) {
    result.observables.merge(s.acc);
    result.solves += s.solves;
    result.memo_hits += s.hits;
  }
  double pairs = 0.0;
  double upper = 0.0;
  for (const auto& r : realizations) {
    pairs += static_cast<double>(r.partition.pairs.size());
    upper += r.partition.upper;
  }
  result.mean_pairs = pairs / static_cast<double>(realizations.size());
  result.mean_upper_bound = upper / static_cast<double>(realizations.size());
  return result;
}

}  // namespace rydhm
