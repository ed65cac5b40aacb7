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

#include <algorithm>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>

#include "bbpl/core/errors.hpp"
#include "bbpl/ctp/ctp.hpp"

namespace bbpl::ctp {
namespace {

void move(const Instance& inst, Trajectory& traj, std::size_t from, std::size_t to) {
  const auto e = inst.edge_between(from, to);
  if (!e) throw std::logic_error("ctp: move along a non-edge");
  traj.nodes.push_back(to);
  traj.distance += inst.edges()[*e].distance;
}

const double kBetaPrior[] = {1.0, 1.0};

}  // namespace

bool goal_reachable(const Instance& inst, const std::vector<bool>& open) {
  std::vector<bool> seen(inst.num_nodes(), false);
  std::vector<std::size_t> stack{inst.start()};
  seen[inst.start()] = true;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    if (u == inst.goal()) return true;
    for (const auto& nb : inst.neighbors(u)) {
      if (open[nb.edge] && !seen[nb.node]) {
        seen[nb.node] = true;
        stack.push_back(nb.node);
      }
    }
  }
  return false;
}

Weather sample_weather(const Instance& inst, Rng& rng) {
  Weather w;
  w.open.resize(inst.edges().size());
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    for (std::size_t e = 0; e < inst.edges().size(); ++e) {
      const double p = inst.edges()[e].open_prob;
      w.open[e] = p >= 1.0 || uniform01(rng) < p;
    }
    if (goal_reachable(inst, w.open)) return w;
  }
  throw ValidationError("ctp: no connected weather in 10^6 draws");
}

PathResult shortest_path(const Instance& inst, const std::vector<bool>& blocked, std::size_t src, std::size_t dst) {
  const auto n = inst.num_nodes();
  if (src >= n || dst >= n) throw std::out_of_range("shortest_path: node out of range");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  std::vector<double> dist(n, kInf);
  std::vector<std::size_t> pred(n, kNone);
  std::vector<bool> done(n, false);
  dist[src] = 0.0;
  // O(n^2) extraction keeps tie-breaking trivially deterministic.
  for (std::size_t iter = 0; iter < n; ++iter) {
    std::size_t u = kNone;
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i] && dist[i] < kInf && (u == kNone || dist[i] < dist[u])) u = i;
    }
    if (u == kNone || u == dst) break;
    done[u] = true;
    for (const auto& nb : inst.neighbors(u)) {
      if (!blocked.empty() && blocked[nb.edge]) continue;
      if (done[nb.node]) continue;
      const double nd = dist[u] + inst.edges()[nb.edge].distance;
      if (nd < dist[nb.node] || (nd == dist[nb.node] && u < pred[nb.node])) {
        dist[nb.node] = nd;
        pred[nb.node] = u;
      }
    }
  }
  PathResult r;
  if (dist[dst] == kInf) return r;
  r.reachable = true;
  r.length = dist[dst];
  for (std::size_t v = dst; v != kNone; v = pred[v]) r.path.push_back(v);
  std::reverse(r.path.begin(), r.path.end());
  return r;
}

Trajectory dfs_agent(const Instance& inst, const Weather& weather, const ChoiceFn& policy, TraceContext& ctx) {
  Trajectory traj;
  std::vector<bool> visited(inst.num_nodes(), false);
  std::vector<std::size_t> stack;
  std::vector<std::size_t> candidates;
  std::size_t u = inst.start();
  visited[u] = true;
  traj.nodes.push_back(u);
  while (u != inst.goal()) {
    candidates.clear();
    for (const auto& nb : inst.neighbors(u)) {
      if (weather.open[nb.edge] && !visited[nb.node]) candidates.push_back(nb.node);
    }
    if (!candidates.empty()) {
      const std::size_t v = policy(ctx, u, candidates);
      if (std::find(candidates.begin(), candidates.end(), v) == candidates.end()) {
        throw std::logic_error("ctp: policy chose a non-candidate");
      }
      ctx.tick();
      stack.push_back(u);
      move(inst, traj, u, v);
      visited[v] = true;
      u = v;
    } else {
      if (stack.empty()) throw std::logic_error("ctp: depth-first search exhausted without reaching the goal");
      const std::size_t back = stack.back();
      stack.pop_back();
      ctx.tick();
      move(inst, traj, u, back);
      u = back;
    }
  }
  return traj;
}

std::size_t edge_policy_choose(TraceContext& ctx, std::size_t u, std::span<const std::size_t> candidates) {
  if (candidates.empty()) throw std::invalid_argument("edge policy: no candidates");
  // A forced move carries no preference information.
  if (candidates.size() == 1) return candidates.front();
  std::vector<double> q(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto addr = Address::make("Q", u, candidates[i]);
    if (const auto* seen = ctx.find(addr)) {
      q[i] = std::get<double>(*seen);
    } else {
      q[i] = ctx.sample_real(addr, DistFamily::beta(), kBetaPrior);
    }
  }
  return candidates[ctx.sample_categorical(Address::make("choose", ctx.actions()), q)];
}

std::size_t random_policy_choose(TraceContext& ctx, std::size_t, std::span<const std::size_t> candidates) {
  if (candidates.empty()) throw std::invalid_argument("random policy: no candidates");
  const std::vector<double> uniform(candidates.size(), 1.0);
  return candidates[ctx.sample_categorical(Address::make("choose", ctx.actions()), uniform)];
}

Trajectory optimistic_agent(const Instance& inst, const Weather& weather, std::size_t action_cap) {
  Trajectory traj;
  std::vector<bool> blocked(inst.edges().size(), false);
  std::size_t u = inst.start();
  traj.nodes.push_back(u);
  std::size_t actions = 0;
  while (u != inst.goal()) {
    for (const auto& nb : inst.neighbors(u)) {
      if (!weather.open[nb.edge]) blocked[nb.edge] = true;
    }
    const auto plan = shortest_path(inst, blocked, u, inst.goal());
    if (!plan.reachable) throw std::logic_error("ctp: optimistic graph lost the goal");
    if (++actions > action_cap) throw EpisodeCapExceeded("ctp: optimistic agent exceeded its action cap");
    move(inst, traj, u, plan.path[1]);
    u = plan.path[1];
  }
  return traj;
}

Trajectory optimistic_agent(const Instance& inst, const Weather& weather) {
  return optimistic_agent(inst, weather, 10 * inst.num_nodes() * (inst.edges().size() + 1));
}

Policy parse_policy(const std::string& name) {
  if (name == "edge") return Policy::Edge;
  if (name == "random") return Policy::Random;
  if (name == "optimistic") return Policy::Optimistic;
  throw ValidationError("ctp: unknown policy '" + name + "' (edge, random, optimistic)");
}

Trajectory run_episode(const Instance& inst, Policy policy, TraceContext& ctx) {
  const Weather weather = sample_weather(inst, ctx.rng());
  switch (policy) {
    case Policy::Edge: return dfs_agent(inst, weather, edge_policy_choose, ctx);
    case Policy::Random: return dfs_agent(inst, weather, random_policy_choose, ctx);
    case Policy::Optimistic: {
      auto traj = optimistic_agent(inst, weather);
      for (std::size_t i = 1; i < traj.nodes.size(); ++i) ctx.tick();
      return traj;
    }
  }
  throw std::logic_error("unreachable");
}

EpisodeProgram make_program(const Instance& inst, Policy policy, std::vector<Trajectory>* trajectories) {
  auto shared = std::make_shared<const Instance>(inst);
  EpisodeProgram p;
  p.horizon = policy == Policy::Optimistic ? inst.num_nodes() * (inst.edges().size() + 1) : 2 * inst.num_nodes();
  p.run = [shared, policy, trajectories](TraceContext& ctx) {
    auto traj = run_episode(*shared, policy, ctx);
    const double reward = -traj.distance;
    if (trajectories) (*trajectories).at(ctx.episode_index()) = std::move(traj);
    return reward;
  };
  return p;
}

std::vector<EdgeCount> edge_frequency(const Instance& inst, std::span<const Trajectory> trajectories) {
  std::vector<EdgeCount> counts(inst.edges().size());
  for (std::size_t e = 0; e < counts.size(); ++e) {
    counts[e].u = inst.edges()[e].u;
    counts[e].v = inst.edges()[e].v;
  }
  std::vector<std::size_t> last_episode(counts.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t k = 0; k < trajectories.size(); ++k) {
    const auto& nodes = trajectories[k].nodes;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const auto e = inst.edge_between(nodes[i - 1], nodes[i]);
      if (!e) throw std::logic_error("edge_frequency: trajectory uses a non-edge");
      ++counts[*e].traversals;
      if (last_episode[*e] != k) {
        last_episode[*e] = k;
        ++counts[*e].episodes;
      }
    }
  }
  return counts;
}

void write_edge_frequency(std::ostream& os, std::span<const EdgeCount> counts) {
  os << "u,v,traversals,episodes\n";
  for (const auto& c : counts) os << c.u << ',' << c.v << ',' << c.traversals << ',' << c.episodes << '\n';
}

}  // namespace bbpl::ctp
