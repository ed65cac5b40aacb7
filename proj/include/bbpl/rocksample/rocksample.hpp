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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bbpl/core/trace.hpp"
#include "bbpl/core/train.hpp"

namespace bbpl::rocksample {

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// N x N field with M rocks at distinct cells. The rover starts in the middle
/// of the left edge, (0, N/2). `good` holds qualities when the field was
/// generated; episodes normally resample them.
struct RockField {
  int size = 0;
  double half_distance = 0.0;  // sensor half-efficiency distance d0
  std::vector<Cell> rocks;
  std::vector<bool> good;

  Cell start() const { return {0, size / 2}; }
  std::size_t num_rocks() const { return rocks.size(); }
  void validate() const;
};

/// Uniform rock positions without replacement, each rock good with
/// probability 0.5, d0 = N/2. Throws ValidationError if M > N^2.
RockField make_field(int size, int num_rocks, std::uint64_t seed);

double euclidean(Cell a, Cell b);
int manhattan(Cell a, Cell b);

// 0.5 + 0.5 * 2^(-dist/d0)
double sense_accuracy(const RockField& field, Cell from, std::size_t rock);

/// Noisy remote reading of a rock's quality (true = reads good). The
/// correctness draw is a fixed Bernoulli record at `addr`.
bool sense(const RockField& field, Cell from, std::size_t rock, bool truly_good, TraceContext& ctx,
           const Address& addr);

enum class MovePolicy {
  Learned,        // theta ~ Beta at ("move" from to reading), move ~ Bernoulli(theta)
  AlwaysMove,
  AlwaysDiscard,
};

MovePolicy parse_policy(const std::string& name);

// Anchor ids in reports: rock index, or these.
inline constexpr int kStartAnchor = -1;
inline constexpr int kExitAnchor = -2;

struct Outcome {
  double reward = 0.0;
  int good_sampled = 0;
  int bad_sampled = 0;
  int steps = 0;  // Manhattan moves, including the exit run
  bool exited = false;
  int decisions = 0;
  std::vector<int> anchors;  // start, visited rocks..., exit
};

/// Left-to-right structured agent. From the current anchor, the remaining
/// rocks are those not visited or discarded with x >= current x; they are
/// considered nearest first (Euclidean, ties by index). Each is sensed, then
/// moved to or discarded for good. At a rock the quality is known exactly and
/// only good rocks are sampled (+10). When no candidate is accepted the rover
/// pays one step per column to leave the field on the right (+10).
/// Costs are -1 per Manhattan step.
Outcome structured_agent(const RockField& field, const std::vector<bool>& good, MovePolicy policy,
                         TraceContext& ctx);

/// Episode program: qualities drawn Bernoulli(0.5) per episode unless
/// `fixed_quality` is given. Outcome j is stored at (*outcomes)[j] when set.
EpisodeProgram make_program(const RockField& field, MovePolicy policy,
                            std::optional<std::vector<bool>> fixed_quality = std::nullopt,
                            std::vector<Outcome>* outcomes = nullptr);

struct TransitionCount {
  int from = 0;
  int to = 0;
  std::size_t moves = 0;
};

std::vector<TransitionCount> transition_frequency(std::span<const Outcome> outcomes);
// CSV "from,to,moves,episodes"; anchors written as start, exit, or rock index.
void write_transition_frequency(std::ostream& os, std::span<const TransitionCount> counts, std::size_t episodes);

// Text format:
//   rocksample-field v1
//   size <N>
//   half_distance <d0>
//   rock <x> <y>
void write_field(std::ostream& os, const RockField& field, const std::vector<std::string>& comments = {});
RockField read_field(std::istream& is);

}  // namespace bbpl::rocksample
