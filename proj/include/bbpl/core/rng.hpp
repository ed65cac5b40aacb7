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

#include <cstdint>
#include <random>

namespace bbpl {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for one episode, a pure function of (master seed, step, episode).
/// Batches can be split across any number of workers without changing draws.
std::uint64_t episode_seed(std::uint64_t master, std::uint64_t step, std::uint64_t episode);

inline Rng episode_stream(std::uint64_t master, std::uint64_t step, std::uint64_t episode) {
  return Rng(episode_seed(master, step, episode));
}

double uniform01(Rng& rng);

}  // namespace bbpl
