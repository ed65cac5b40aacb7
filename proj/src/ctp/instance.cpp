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
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bbpl/core/errors.hpp"
#include "bbpl/ctp/ctp.hpp"

namespace bbpl::ctp {
namespace {

bool all_connected(std::size_t n, const std::vector<std::vector<Neighbor>>& adj) {
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (const auto& nb : adj[u]) {
      if (!seen[nb.node]) {
        seen[nb.node] = true;
        ++count;
        stack.push_back(nb.node);
      }
    }
  }
  return count == n;
}

}  // namespace

Instance::Instance(std::vector<Point> nodes, std::vector<Edge> edges, std::size_t start, std::size_t goal)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), start_(start), goal_(goal), adjacency_(nodes_.size()) {
  const auto n = nodes_.size();
  if (n < 2) throw ValidationError("ctp: instance needs at least two nodes");
  if (start_ >= n || goal_ >= n) throw ValidationError("ctp: start/goal out of range");
  if (start_ == goal_) throw ValidationError("ctp: start and goal must differ");
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto& edge = edges_[e];
    if (edge.u >= n || edge.v >= n) throw ValidationError("ctp: edge endpoint out of range");
    if (edge.u == edge.v) throw ValidationError("ctp: self loop");
    if (!(edge.distance > 0.0) || !std::isfinite(edge.distance)) throw ValidationError("ctp: edge distance must be > 0");
    if (!(edge.open_prob > 0.0) || edge.open_prob > 1.0) throw ValidationError("ctp: open probability outside (0, 1]");
    if (edge.u > edge.v) std::swap(edge.u, edge.v);
    adjacency_[edge.u].push_back({edge.v, e});
    adjacency_[edge.v].push_back({edge.u, e});
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (list[i].node == list[i - 1].node) throw ValidationError("ctp: parallel edges");
    }
  }
  if (!all_connected(n, adjacency_)) throw ValidationError("ctp: graph is not connected with all edges open");
}

std::optional<std::size_t> Instance::edge_between(std::size_t u, std::size_t v) const {
  for (const auto& nb : adjacency_.at(u)) {
    if (nb.node == v) return nb.edge;
  }
  return std::nullopt;
}

Instance Instance::with_open_prob(double p) const {
  auto edges = edges_;
  for (auto& e : edges) e.open_prob = p;
  return Instance(nodes_, std::move(edges), start_, goal_);
}

Instance generate_instance(std::size_t n_nodes, double radius, double open_prob, std::uint64_t seed) {
  if (n_nodes < 2) throw ValidationError("ctp generator: n_nodes must be >= 2");
  if (!(radius > 0.0)) throw ValidationError("ctp generator: radius must be > 0");
  if (!(open_prob > 0.0) || open_prob > 1.0) throw ValidationError("ctp generator: open_prob outside (0, 1]");
  Rng rng(splitmix64(seed ^ 0xC7B0'0000'0000'0001ULL));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Point> pts(n_nodes);
    for (auto& p : pts) {
      p.x = uniform01(rng);
      p.y = uniform01(rng);
    }
    std::vector<Edge> edges;
    std::vector<std::vector<Neighbor>> adj(n_nodes);
    for (std::size_t u = 0; u < n_nodes; ++u) {
      for (std::size_t v = u + 1; v < n_nodes; ++v) {
        const double d = std::hypot(pts[u].x - pts[v].x, pts[u].y - pts[v].y);
        if (d <= radius && d > 0.0) {
          adj[u].push_back({v, edges.size()});
          adj[v].push_back({u, edges.size()});
          edges.push_back({u, v, d, open_prob});
        }
      }
    }
    if (!all_connected(n_nodes, adj)) continue;
    std::size_t start = 0;
    std::size_t goal = 0;
    for (std::size_t i = 1; i < n_nodes; ++i) {
      if (pts[i].x < pts[start].x) start = i;
      if (pts[i].x > pts[goal].x) goal = i;
    }
    return Instance(std::move(pts), std::move(edges), start, goal);
  }
  throw ValidationError("ctp generator: no connected graph in 1000 attempts (radius too small?)");
}

void write_instance(std::ostream& os, const Instance& inst, const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << '\n';
  os << "ctp-instance v1\n" << std::setprecision(17);
  for (std::size_t i = 0; i < inst.num_nodes(); ++i) {
    os << "node " << i << ' ' << inst.nodes()[i].x << ' ' << inst.nodes()[i].y << '\n';
  }
  for (const auto& e : inst.edges()) {
    os << "edge " << e.u << ' ' << e.v << ' ' << e.distance << ' ' << e.open_prob << '\n';
  }
  os << "start " << inst.start() << '\n' << "goal " << inst.goal() << '\n';
}

Instance read_instance(std::istream& is) {
  std::string line;
  bool header = false;
  std::vector<Point> nodes;
  std::vector<bool> seen;
  std::vector<Edge> edges;
  std::optional<std::size_t> start, goal;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) { throw ValidationError("ctp instance line " + std::to_string(lineno) + ": " + msg); };
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "ctp-instance v1") fail("expected 'ctp-instance v1'");
      header = true;
      continue;
    }
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "node") {
      std::size_t id;
      Point p;
      if (!(ls >> id >> p.x >> p.y)) fail("malformed node");
      if (id >= nodes.size()) {
        nodes.resize(id + 1);
        seen.resize(id + 1, false);
      }
      if (seen[id]) fail("duplicate node id");
      nodes[id] = p;
      seen[id] = true;
    } else if (kind == "edge") {
      Edge e;
      if (!(ls >> e.u >> e.v >> e.distance >> e.open_prob)) fail("malformed edge");
      edges.push_back(e);
    } else if (kind == "start") {
      std::size_t s;
      if (!(ls >> s)) fail("malformed start");
      start = s;
    } else if (kind == "goal") {
      std::size_t g;
      if (!(ls >> g)) fail("malformed goal");
      goal = g;
    } else {
      fail("unknown record '" + kind + "'");
    }
  }
  if (!header) throw ValidationError("ctp instance: missing header");
  if (!start || !goal) throw ValidationError("ctp instance: missing start or goal");
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw ValidationError("ctp instance: node ids not contiguous");
  return Instance(std::move(nodes), std::move(edges), *start, *goal);
}

}  // namespace bbpl::ctp
