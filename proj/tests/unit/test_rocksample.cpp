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

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bbpl/core/errors.hpp"
#include "bbpl/rocksample/rocksample.hpp"

using namespace bbpl;
using namespace bbpl::rocksample;

namespace {

RockField field_of(int n, std::vector<Cell> rocks) {
  RockField f;
  f.size = n;
  f.half_distance = n / 2.0;
  f.rocks = std::move(rocks);
  f.validate();
  return f;
}

Outcome run(const RockField& f, const std::vector<bool>& good, MovePolicy p, std::uint64_t seed,
            const HyperStore& store = {}) {
  TraceContext ctx(store, seed, 10 * (f.num_rocks() + 1));
  return structured_agent(f, good, p, ctx);
}

Cell anchor_cell(const RockField& f, int anchor) { return anchor == kStartAnchor ? f.start() : f.rocks[anchor]; }

}  // namespace

TEST_SUITE("rocksample field") {
  TEST_CASE("generator") {
    const auto full = make_field(5, 25, 1);
    CHECK(full.num_rocks() == 25);
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 5; ++y) CHECK(std::find(full.rocks.begin(), full.rocks.end(), Cell{x, y}) != full.rocks.end());
    CHECK_THROWS_AS(make_field(5, 26, 1), ValidationError);
    CHECK_THROWS_AS(make_field(5, 0, 1), ValidationError);
    const auto a = make_field(7, 6, 44), b = make_field(7, 6, 44);
    CHECK(a.rocks == b.rocks);
    CHECK(a.good == b.good);
    CHECK(a.half_distance == 3.5);
    CHECK(a.start() == Cell{0, 3});
  }

  TEST_CASE("good-rock fraction") {
    std::size_t good = 0, total = 0;
    for (std::uint64_t s = 0; s < 10000; ++s) {
      const auto f = make_field(5, 5, s);
      for (bool g : f.good) good += g;
      total += f.num_rocks();
    }
    CHECK(std::abs(good / double(total) - 0.5) < 0.02);
  }

  TEST_CASE("file round trip and validation") {
    const auto f = make_field(6, 4, 3);
    std::stringstream ss;
    write_field(ss, f, {"note"});
    const auto back = read_field(ss);
    CHECK(back.size == f.size);
    CHECK(back.half_distance == f.half_distance);
    CHECK(back.rocks == f.rocks);
    std::istringstream dup("rocksample-field v1\nsize 3\nhalf_distance 1.5\nrock 1 1\nrock 1 1\n");
    CHECK_THROWS_AS(read_field(dup), ValidationError);
    std::istringstream outside("rocksample-field v1\nsize 3\nhalf_distance 1.5\nrock 3 0\n");
    CHECK_THROWS_AS(read_field(outside), ValidationError);
  }
}

TEST_SUITE("rocksample sensing") {
  TEST_CASE("accuracy curve") {
    const auto f = field_of(4, {{0, 2}, {2, 2}, {3, 0}});
    CHECK(sense_accuracy(f, f.start(), 0) == 1.0);
    CHECK(sense_accuracy(f, f.start(), 1) == doctest::Approx(0.75));
    auto far = field_of(1000, {{999, 0}});
    far.half_distance = 1.0;
    CHECK(sense_accuracy(far, {0, 999}, 0) == 0.5);
  }

  TEST_CASE("reading frequency matches the accuracy") {
    const auto f = field_of(4, {{2, 2}});
    HyperStore store;
    int correct = 0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
      TraceContext ctx(store, static_cast<std::uint64_t>(k), 1);
      correct += sense(f, f.start(), 0, true, ctx, Address("s"));
    }
    CHECK(std::abs(correct / double(n) - 0.75) < 0.005);
  }
}

TEST_SUITE("rocksample agent") {
  TEST_CASE("adjacent good rock, always move") {
    const auto f = field_of(5, {{1, 2}});
    const auto o = run(f, {true}, MovePolicy::AlwaysMove, 1);
    CHECK(o.reward == -1 + 10 - (5 - 1) + 10);
    CHECK(o.good_sampled == 1);
    CHECK(o.anchors == std::vector<int>{kStartAnchor, 0, kExitAnchor});
  }

  TEST_CASE("all bad, always discard") {
    const auto f = field_of(5, {{1, 2}, {3, 4}, {4, 0}});
    const auto o = run(f, {false, false, false}, MovePolicy::AlwaysDiscard, 1);
    CHECK(o.reward == 10 - 5);
    CHECK(o.decisions == 3);
  }

  TEST_CASE("bad rocks are visited but never sampled") {
    const auto f = field_of(5, {{1, 2}, {2, 2}});
    const auto o = run(f, {false, true}, MovePolicy::AlwaysMove, 1);
    CHECK(o.bad_sampled == 0);
    CHECK(o.good_sampled == 1);
    CHECK(o.reward == -1 - 1 + 10 - 3 + 10);
  }

  TEST_CASE("rocks behind the rover are skipped") {
    // After moving to (2, 2) the rock at x = 1 is no longer a candidate.
    const auto f = field_of(5, {{2, 2}, {1, 0}});
    const auto o = run(f, {true, true}, MovePolicy::AlwaysMove, 1);
    CHECK(o.anchors == std::vector<int>{kStartAnchor, 0, kExitAnchor});
    CHECK(o.decisions == 1);
  }

  TEST_CASE("properties on random fields and policies") {
    std::mt19937_64 gen(13);
    HyperStore store;
    for (int trial = 0; trial < 3000; ++trial) {
      const int n = 2 + static_cast<int>(gen() % 8);
      const auto f = make_field(n, 1 + static_cast<int>(gen() % std::min(10, n * n)), gen());
      std::vector<bool> good(f.num_rocks());
      for (std::size_t r = 0; r < good.size(); ++r) good[r] = gen() % 2;
      const auto policy = static_cast<MovePolicy>(gen() % 3);
      const auto o = run(f, good, policy, gen(), store);
      CHECK(o.bad_sampled == 0);
      CHECK(o.reward == 10.0 * o.good_sampled - 10.0 * o.bad_sampled - o.steps + 10.0 * o.exited);
      CHECK(o.decisions <= static_cast<int>(f.num_rocks()));
      // Steps retrace the anchors; x never decreases.
      int steps = 0;
      for (std::size_t i = 1; i + 1 < o.anchors.size(); ++i) {
        const auto a = anchor_cell(f, o.anchors[i - 1]), b = anchor_cell(f, o.anchors[i]);
        CHECK(b.x >= a.x);
        steps += manhattan(a, b);
      }
      steps += f.size - anchor_cell(f, o.anchors[o.anchors.size() - 2]).x;
      CHECK(o.steps == steps);
      CHECK(o.exited);
    }
  }

  TEST_CASE("learned policy registers move preferences by reading") {
    const auto f = field_of(5, {{1, 2}, {3, 1}});
    HyperStore store;
    TraceContext ctx(store, 3, 30);
    structured_agent(f, {true, false}, MovePolicy::Learned, ctx);
    auto t = std::move(ctx).finish(0.0);
    REQUIRE_FALSE(t.new_entries.empty());
    for (const auto& e : t.new_entries) {
      CHECK(e.address.tag() == "move");
      CHECK(e.family == DistFamily::beta());
      CHECK(e.hypers == std::vector<double>{1.0, 1.0});
      const auto& reading = std::get<std::string>(e.address.args().back());
      CHECK((reading == "good" || reading == "bad"));
    }
  }

  TEST_CASE("transition report") {
    const auto f = make_field(5, 5, 11);
    std::vector<Outcome> outcomes(400);
    evaluate(make_program(f, MovePolicy::Learned, std::nullopt, &outcomes), {}, outcomes.size(), 2);
    const auto counts = transition_frequency(outcomes);
    std::size_t moves = 0, expected = 0;
    for (const auto& c : counts) moves += c.moves;
    for (const auto& o : outcomes) expected += o.anchors.size() - 1;
    CHECK(moves == expected);
    std::size_t exits = 0;
    for (const auto& c : counts)
      if (c.to == kExitAnchor) exits += c.moves;
    CHECK(exits == outcomes.size());
    std::ostringstream os;
    write_transition_frequency(os, counts, outcomes.size());
    CHECK(os.str().rfind("from,to,moves,episodes\n", 0) == 0);
  }

  TEST_CASE("policy names") {
    CHECK(parse_policy("learned") == MovePolicy::Learned);
    CHECK(parse_policy("always-move") == MovePolicy::AlwaysMove);
    CHECK_THROWS_AS(parse_policy("greedy"), ValidationError);
  }
}
