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

#include "bbpl/core/train.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "bbpl/core/errors.hpp"

namespace bbpl {

BatchStats summarize(const std::vector<double>& rewards) {
  BatchStats s;
  if (rewards.empty()) return s;
  const double n = static_cast<double>(rewards.size());
  // Summing offsets from the first reward keeps a constant batch exact.
  const double r0 = rewards.front();
  double offset = 0.0;
  for (double r : rewards) offset += r - r0;
  s.mean_reward = r0 + offset / n;
  if (rewards.size() > 1) {
    double ss = 0.0;
    for (double r : rewards) ss += (r - s.mean_reward) * (r - s.mean_reward);
    s.stderr_reward = std::sqrt(ss / (n - 1.0) / n);
  }
  return s;
}

std::vector<Trace> simulate_batch(const EpisodeProgram& program, const HyperStore& store, std::size_t n,
                                  std::uint64_t seed, std::uint64_t step, unsigned workers) {
  std::vector<Trace> traces(n);
  std::vector<std::exception_ptr> errors(n);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      try {
        TraceContext ctx(store, episode_seed(seed, step, j), program.action_cap(), j);
        const double reward = program.run(ctx);
        traces[j] = std::move(ctx).finish(reward);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };

  const std::size_t w = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (w == 1) {
    run_range(0, n);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(w);
    const std::size_t chunk = (n + w - 1) / w;
    for (std::size_t t = 0; t < w; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return traces;
}

void merge_new_entries(HyperStore& store, const std::vector<Trace>& traces) {
  for (const auto& t : traces) {
    for (const auto& e : t.new_entries) {
      if (!store.contains(e.address)) store.insert(e.address, e.family, e.hypers);
    }
  }
}

TrainResult train(const EpisodeProgram& program, const TrainConfig& config, HyperStore initial) {
  if (config.samples_per_step < 2) throw std::invalid_argument("train: samples_per_step must be >= 2");
  TrainResult out;
  out.store = std::move(initial);
  out.optimizer.settings = config.optimizer;
  out.history.reserve(config.steps);
  for (std::size_t k = 0; k < config.steps; ++k) {
    auto traces = simulate_batch(program, out.store, config.samples_per_step, config.seed, k, config.workers);
    merge_new_entries(out.store, traces);
    std::vector<double> rewards;
    rewards.reserve(traces.size());
    for (const auto& t : traces) rewards.push_back(t.reward);
    out.history.push_back(summarize(rewards));
    const auto grad = estimate_gradient(traces, config.beta, config.baseline);
    optim_step(out.optimizer, out.store, grad);
  }
  return out;
}

EvalResult evaluate(const EpisodeProgram& program, const HyperStore& store, std::size_t episodes, std::uint64_t seed,
                    unsigned workers) {
  if (episodes < 1) throw std::invalid_argument("evaluate: episodes must be >= 1");
  auto traces = simulate_batch(program, store, episodes, seed, kEvalStream, workers);
  EvalResult out;
  out.rewards.reserve(episodes);
  for (const auto& t : traces) out.rewards.push_back(t.reward);
  out.stats = summarize(out.rewards);
  return out;
}

}  // namespace bbpl
