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

#include "bbpl/rocksample/rocksample.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>

#include "bbpl/core/errors.hpp"

namespace bbpl::rocksample {
namespace {

const double kBetaPrior[] = {1.0, 1.0};

Address::Arg anchor_arg(int anchor) {
  if (anchor == kStartAnchor) return std::string("start");
  return static_cast<std::int64_t>(anchor);
}

std::string anchor_name(int anchor) {
  if (anchor == kStartAnchor) return "start";
  if (anchor == kExitAnchor) return "exit";
  return std::to_string(anchor);
}

}  // namespace

void RockField::validate() const {
  if (size < 1) throw ValidationError("rocksample: size must be >= 1");
  if (!(half_distance > 0.0)) throw ValidationError("rocksample: half_distance must be > 0");
  if (rocks.empty()) throw ValidationError("rocksample: need at least one rock");
  for (std::size_t i = 0; i < rocks.size(); ++i) {
    const auto& r = rocks[i];
    if (r.x < 0 || r.y < 0 || r.x >= size || r.y >= size) throw ValidationError("rocksample: rock outside the grid");
    for (std::size_t j = 0; j < i; ++j) {
      if (rocks[j] == r) throw ValidationError("rocksample: two rocks share a cell");
    }
  }
  if (!good.empty() && good.size() != rocks.size()) throw ValidationError("rocksample: quality count mismatch");
}

RockField make_field(int size, int num_rocks, std::uint64_t seed) {
  if (size < 1) throw ValidationError("rocksample: size must be >= 1");
  if (num_rocks < 1 || num_rocks > size * size) throw ValidationError("rocksample: need 1 <= M <= N^2 rocks");
  Rng rng(splitmix64(seed ^ 0x5A3B'0000'0000'0002ULL));
  std::vector<int> cells(static_cast<std::size_t>(size * size));
  std::iota(cells.begin(), cells.end(), 0);
  // partial Fisher-Yates
  for (int i = 0; i < num_rocks; ++i) {
    const auto span = static_cast<std::uint64_t>(cells.size() - static_cast<std::size_t>(i));
    const auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng() % span);
    std::swap(cells[static_cast<std::size_t>(i)], cells[j]);
  }
  RockField f;
  f.size = size;
  f.half_distance = size / 2.0;
  for (int i = 0; i < num_rocks; ++i) {
    const int c = cells[static_cast<std::size_t>(i)];
    f.rocks.push_back({c % size, c / size});
    f.good.push_back(uniform01(rng) < 0.5);
  }
  return f;
}

double euclidean(Cell a, Cell b) { return std::hypot(double(a.x - b.x), double(a.y - b.y)); }

int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

double sense_accuracy(const RockField& field, Cell from, std::size_t rock) {
  const double dist = euclidean(from, field.rocks.at(rock));
  return 0.5 + 0.5 * std::exp2(-dist / field.half_distance);
}

bool sense(const RockField& field, Cell from, std::size_t rock, bool truly_good, TraceContext& ctx,
           const Address& addr) {
  const bool correct = ctx.sample_bernoulli(addr, sense_accuracy(field, from, rock));
  return correct ? truly_good : !truly_good;
}

MovePolicy parse_policy(const std::string& name) {
  if (name == "learned") return MovePolicy::Learned;
  if (name == "always-move") return MovePolicy::AlwaysMove;
  if (name == "always-discard") return MovePolicy::AlwaysDiscard;
  throw ValidationError("rocksample: unknown policy '" + name + "' (learned, always-move, always-discard)");
}

Outcome structured_agent(const RockField& field, const std::vector<bool>& good, MovePolicy policy,
                         TraceContext& ctx) {
  const std::size_t m = field.num_rocks();
  if (good.size() != m) throw std::invalid_argument("rocksample: quality vector size mismatch");
  Outcome out;
  std::vector<bool> gone(m, false);  // visited or discarded
  Cell pos = field.start();
  int anchor = kStartAnchor;
  out.anchors.push_back(anchor);

  std::vector<std::size_t> candidates;
  while (true) {
    candidates.clear();
    for (std::size_t r = 0; r < m; ++r) {
      if (!gone[r] && field.rocks[r].x >= pos.x) candidates.push_back(r);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
      return euclidean(pos, field.rocks[a]) < euclidean(pos, field.rocks[b]);
    });

    bool moved = false;
    for (std::size_t r : candidates) {
      const auto to = static_cast<std::int64_t>(r);
      const bool reads_good = sense(field, pos, r, good[r], ctx, Address("sense", {anchor_arg(anchor), to}));
      bool go = false;
      switch (policy) {
        case MovePolicy::AlwaysMove: go = true; break;
        case MovePolicy::AlwaysDiscard: go = false; break;
        case MovePolicy::Learned: {
          const Address key("move", {anchor_arg(anchor), to, std::string(reads_good ? "good" : "bad")});
          const double theta = ctx.sample_real(key, DistFamily::beta(), kBetaPrior);
          go = ctx.sample_bernoulli(Address("go", {anchor_arg(anchor), to}), theta);
          break;
        }
      }
      ctx.tick();
      ++out.decisions;
      gone[r] = true;
      if (!go) continue;
      const int cost = manhattan(pos, field.rocks[r]);
      out.steps += cost;
      out.reward -= cost;
      pos = field.rocks[r];
      anchor = static_cast<int>(r);
      out.anchors.push_back(anchor);
      // exact at the rock: sample only good ones
      if (good[r]) {
        ++out.good_sampled;
        out.reward += 10.0;
      }
      moved = true;
      break;
    }
    if (!moved) break;
  }

  ctx.tick();
  const int exit_cost = field.size - pos.x;
  out.steps += exit_cost;
  out.reward -= exit_cost;
  out.reward += 10.0;
  out.exited = true;
  out.anchors.push_back(kExitAnchor);
  return out;
}

EpisodeProgram make_program(const RockField& field, MovePolicy policy, std::optional<std::vector<bool>> fixed_quality,
                            std::vector<Outcome>* outcomes) {
  field.validate();
  if (fixed_quality && fixed_quality->size() != field.num_rocks()) {
    throw ValidationError("rocksample: fixed quality vector size mismatch");
  }
  auto shared = std::make_shared<const RockField>(field);
  auto quality = std::make_shared<const std::optional<std::vector<bool>>>(std::move(fixed_quality));
  EpisodeProgram p;
  p.horizon = field.num_rocks() + 1;
  p.run = [shared, quality, policy, outcomes](TraceContext& ctx) {
    std::vector<bool> good;
    if (*quality) {
      good = **quality;
    } else {
      good.resize(shared->num_rocks());
      for (std::size_t r = 0; r < good.size(); ++r) good[r] = uniform01(ctx.rng()) < 0.5;
    }
    auto outcome = structured_agent(*shared, good, policy, ctx);
    const double reward = outcome.reward;
    if (outcomes) outcomes->at(ctx.episode_index()) = std::move(outcome);
    return reward;
  };
  return p;
}

std::vector<TransitionCount> transition_frequency(std::span<const Outcome> outcomes) {
  std::map<std::pair<int, int>, std::size_t> counts;
  for (const auto& o : outcomes) {
    for (std::size_t i = 1; i < o.anchors.size(); ++i) ++counts[{o.anchors[i - 1], o.anchors[i]}];
  }
  std::vector<TransitionCount> out;
  for (const auto& [key, n] : counts) out.push_back({key.first, key.second, n});
  return out;
}

void write_transition_frequency(std::ostream& os, std::span<const TransitionCount> counts, std::size_t episodes) {
  os << "from,to,moves,episodes\n";
  for (const auto& c : counts) os << anchor_name(c.from) << ',' << anchor_name(c.to) << ',' << c.moves << ',' << episodes << '\n';
}

void write_field(std::ostream& os, const RockField& field, const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << '\n';
  os << "rocksample-field v1\n";
  os << "size " << field.size << '\n';
  os << "half_distance " << std::setprecision(17) << field.half_distance << '\n';
  for (const auto& r : field.rocks) os << "rock " << r.x << ' ' << r.y << '\n';
}

RockField read_field(std::istream& is) {
  RockField f;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ValidationError("rocksample field line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "rocksample-field v1") fail("expected 'rocksample-field v1'");
      header = true;
      continue;
    }
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "size") {
      if (!(ls >> f.size)) fail("malformed size");
    } else if (kind == "half_distance") {
      if (!(ls >> f.half_distance)) fail("malformed half_distance");
    } else if (kind == "rock") {
      Cell c;
      if (!(ls >> c.x >> c.y)) fail("malformed rock");
      f.rocks.push_back(c);
    } else {
      fail("unknown record '" + kind + "'");
    }
  }
  if (!header) throw ValidationError("rocksample field: missing header");
  f.validate();
  return f;
}

}  // namespace bbpl::rocksample
