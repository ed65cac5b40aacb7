// Copyright 2026 The bbpl Authors. All Rights Reserved.
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "bbpl/core/estimator.hpp"
#include "bbpl/core/hyperstore.hpp"
#include "bbpl/core/optimizer.hpp"
#include "bbpl/core/trace.hpp"

namespace bbpl {

/// One simulated episode: a policy program interacting with its world. All
/// randomness goes through the context; the return value is the reward.
struct EpisodeProgram {
  std::function<double(TraceContext&)> run;
  // Natural episode length in agent actions; the hard cap is 10x this.
  std::size_t horizon = 1;

  std::size_t action_cap() const { return 10 * horizon; }
};

struct TrainConfig {
  std::size_t samples_per_step = 1000;
  std::size_t steps = 0;
  double beta = 1.0;
  OptimizerSettings optimizer;
  Baseline baseline = Baseline::LogWeight;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct BatchStats {
  double mean_reward = 0.0;
  double stderr_reward = 0.0;
};

BatchStats summarize(const std::vector<double>& rewards);

struct TrainResult {
  HyperStore store;
  OptimState optimizer;
  std::vector<BatchStats> history;
};

/// Runs n episodes against a frozen store. Episode j uses the stream
/// episode_stream(seed, step, j), so output is independent of `workers`.
/// The first failing episode (by index) is rethrown.
std::vector<Trace> simulate_batch(const EpisodeProgram& program, const HyperStore& store, std::size_t n,
                                  std::uint64_t seed, std::uint64_t step, unsigned workers);

/// Adds each trace's lazily created addresses to the store, in batch order.
void merge_new_entries(HyperStore& store, const std::vector<Trace>& traces);

/// Gradient ascent on the hyperparameters: `steps` rounds of
/// simulate -> merge new addresses -> estimate -> optimizer step.
TrainResult train(const EpisodeProgram& program, const TrainConfig& config, HyperStore initial = {});

struct EvalResult {
  std::vector<double> rewards;
  BatchStats stats;
};

// Step index used for evaluation streams, disjoint from training steps.
inline constexpr std::uint64_t kEvalStream = 0xE7A1'0000'0000'0000ULL;

/// Frozen-policy evaluation; the store is never modified.
EvalResult evaluate(const EpisodeProgram& program, const HyperStore& store, std::size_t episodes, std::uint64_t seed,
                    unsigned workers = 1);

}  // namespace bbpl
