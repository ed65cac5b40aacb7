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
#include <iosfwd>
#include <optional>
#include <string>
#include <span>
#include <vector>

#include "bbpl/core/rng.hpp"
#include "bbpl/core/trace.hpp"
#include "bbpl/core/train.hpp"

namespace bbpl::ctp {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double distance = 0.0;
  double open_prob = 1.0;
};

struct Neighbor {
  std::size_t node = 0;
  std::size_t edge = 0;
};

/// Undirected road graph with known distances and open probabilities.
/// The constructor validates: start != goal, d(e) > 0, p(e) in (0, 1], no
/// self loops or parallel edges, and connectivity with every edge open.
class Instance {
 public:
  Instance(std::vector<Point> nodes, std::vector<Edge> edges, std::size_t start, std::size_t goal);

  std::size_t num_nodes() const { return nodes_.size(); }
  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t start() const { return start_; }
  std::size_t goal() const { return goal_; }
  // Sorted by neighbor index.
  std::span<const Neighbor> neighbors(std::size_t u) const { return adjacency_[u]; }
  std::optional<std::size_t> edge_between(std::size_t u, std::size_t v) const;

  Instance with_open_prob(double p) const;

 private:
  std::vector<Point> nodes_;
  std::vector<Edge> edges_;
  std::size_t start_;
  std::size_t goal_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

// Open/blocked status of every edge, indexed by edge id.
struct Weather {
  std::vector<bool> open;
};

struct Trajectory {
  std::vector<std::size_t> nodes;  // includes backtracking moves
  double distance = 0.0;
};

struct PathResult {
  bool reachable = false;
  std::vector<std::size_t> path;  // src ... dst; {src} when src == dst
  double length = 0.0;
};

/// Random geometric graph: n uniform points in the unit square, an edge for
/// every pair within `radius` with Euclidean length, resampled until
/// connected (1000 attempts, then ValidationError). Start is the leftmost node
/// and goal the rightmost.
Instance generate_instance(std::size_t n_nodes, double radius, double open_prob, std::uint64_t seed);

bool goal_reachable(const Instance& inst, const std::vector<bool>& open);

/// Each edge open independently with p(e), resampled until the goal is
/// reachable. Gives up after 10^6 draws.
Weather sample_weather(const Instance& inst, Rng& rng);

/// Dijkstra over edges not in `blocked` (empty means nothing blocked). Ties
/// prefer the smallest node index, both for extraction and predecessor.
PathResult shortest_path(const Instance& inst, const std::vector<bool>& blocked, std::size_t src, std::size_t dst);

using ChoiceFn = std::function<std::size_t(TraceContext&, std::size_t u, std::span<const std::size_t> candidates)>;

/// Depth-first walk: at each node the open, unvisited neighbors are the
/// candidates; the policy picks one, otherwise the agent physically
/// backtracks along its stack. Every move is one action on the context.
Trajectory dfs_agent(const Instance& inst, const Weather& weather, const ChoiceFn& policy, TraceContext& ctx);

/// Samples preferences Q(u,v) ~ Beta at ("Q" u v), initial hypers (1, 1),
/// once per episode, then picks v with probability Q(u,v) / sum Q(u,.).
std::size_t edge_policy_choose(TraceContext& ctx, std::size_t u, std::span<const std::size_t> candidates);

std::size_t random_policy_choose(TraceContext& ctx, std::size_t u, std::span<const std::size_t> candidates);

/// Replanning baseline: shortest path assuming unobserved edges are open.
/// Blocked edges incident to visited nodes are remembered.
Trajectory optimistic_agent(const Instance& inst, const Weather& weather, std::size_t action_cap);
Trajectory optimistic_agent(const Instance& inst, const Weather& weather);

enum class Policy { Edge, Random, Optimistic };

Policy parse_policy(const std::string& name);

/// One episode: sample weather, walk with the chosen policy.
Trajectory run_episode(const Instance& inst, Policy policy, TraceContext& ctx);

/// Episode program with reward = -distance. When `trajectories` is set, the
/// trajectory of episode j is stored at index j (must be pre-sized).
EpisodeProgram make_program(const Instance& inst, Policy policy, std::vector<Trajectory>* trajectories = nullptr);

struct EdgeCount {
  std::size_t u = 0;
  std::size_t v = 0;
  std::size_t traversals = 0;  // both directions, every traversal
  std::size_t episodes = 0;    // episodes traversing the edge at least once
};

std::vector<EdgeCount> edge_frequency(const Instance& inst, std::span<const Trajectory> trajectories);
void write_edge_frequency(std::ostream& os, std::span<const EdgeCount> counts);

// Text format:
//   ctp-instance v1
//   node <id> <x> <y>
//   edge <u> <v> <distance> <open_prob>
//   start <id>
//   goal <id>
void write_instance(std::ostream& os, const Instance& inst, const std::vector<std::string>& comments = {});
Instance read_instance(std::istream& is);

}  // namespace bbpl::ctp
