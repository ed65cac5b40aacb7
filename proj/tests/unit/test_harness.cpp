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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include <unistd.h>

#include "bbpl/core/errors.hpp"
#include "bbpl/ctp/ctp.hpp"
#include "bbpl/harness/harness.hpp"
#include "bbpl/rocksample/rocksample.hpp"

using namespace bbpl;
using namespace bbpl::harness;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("bbpl_harness_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> data_lines(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

const char* kSmallCtp = R"(
domain: ctp
policy: edge
seed: 5
samples_per_step: 40
steps: 3
eval_episodes: 50
baselines: [optimistic, prior]
ctp: {nodes: 10, radius: 0.5, open_prob: 0.8, instance_seed: 2}
)";

const char* kSmallGuessWho = R"(
domain: guesswho
seed: 2
samples_per_step: 20
steps: 2
eval_episodes: 30
baselines: [random, voi]
guesswho: {questions: 3, t_values: [0, 3]}
)";

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults") {
    const auto s = parse_spec("domain: rocksample\n");
    CHECK(s.policy == "learned");
    CHECK(s.train.samples_per_step == 1000);
    CHECK(s.eval_episodes == 1000);
    CHECK(s.train.optimizer.rho0 == 0.1);
    CHECK(s.train.optimizer.tau == 1.0);
    CHECK(s.train.optimizer.kappa == 0.5);
    CHECK(s.train.optimizer.decay == 0.9);
    CHECK(s.train.beta == 1.0);
    CHECK(s.restarts == 5);
    CHECK(parse_spec("domain: ctp\n").policy == "edge");
  }

  TEST_CASE("rejections") {
    CHECK_THROWS_AS(parse_spec(""), ValidationError);
    CHECK_THROWS_AS(parse_spec("domain: chess\n"), ValidationError);
    CHECK_THROWS_AS(parse_spec("domain: ctp\nstpes: 3\n"), ValidationError);
    CHECK_THROWS_AS(parse_spec("domain: ctp\nctp: {nodez: 3}\n"), ValidationError);
    CHECK_THROWS_AS(parse_spec("domain: ctp\nsamples_per_step: 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_spec("domain: ctp\nbeta: 0\n"), ValidationError);
    CHECK_THROWS_AS(parse_spec("domain: ctp\nsteps: many\n"), ValidationError);
    CHECK_THROWS_AS(parse_spec("domain: ctp\npolicy: voi\n"), ValidationError);
    CHECK_THROWS_AS(parse_spec("domain: guesswho\nbaselines: [optimistic]\n"), ValidationError);
    CHECK_THROWS_AS(parse_spec("domain: ctp\nctp: {instance: no/such/file.txt}\n"), ValidationError);
    CHECK_THROWS_AS(parse_spec("domain: guesswho\nguesswho: {accuracy: 0.5}\n"), ValidationError);
    CHECK_THROWS_AS(parse_spec("domain: [unbalanced\n"), ValidationError);
  }

  TEST_CASE("hash covers results, not scheduling") {
    auto a = parse_spec(kSmallCtp);
    auto b = parse_spec(kSmallCtp);
    CHECK(a.hash == b.hash);
    CHECK(a.hash.size() == 16);
    b.train.seed = 6;
    finalize(b);
    CHECK(a.hash != b.hash);
    b.train.seed = 5;
    b.train.workers = 8;
    finalize(b);
    CHECK(a.hash == b.hash);
  }

  TEST_CASE("relative paths resolve against the config") {
    TempDir dir;
    {
      std::ofstream(dir.path / "field.txt") << "rocksample-field v1\nsize 3\nhalf_distance 1.5\nrock 1 1\n";
      std::ofstream(dir.path / "exp.yaml") << "domain: rocksample\nrocksample: {field: field.txt}\n";
    }
    const auto s = load_spec(dir.path / "exp.yaml");
    CHECK(fs::path(s.rocksample.field) == (dir.path / "field.txt").lexically_normal());
  }
}

TEST_SUITE("commands") {
  TEST_CASE("train with zero steps writes an empty history") {
    TempDir dir;
    auto spec = parse_spec(kSmallGuessWho);
    spec.train.steps = 0;
    finalize(spec);
    cmd_train(spec, {dir.path, 1});
    CHECK(data_lines(dir.path / "history.csv") == std::vector<std::string>{"step,mean_reward,stderr"});
    CHECK(load_store(dir.path / "store.txt", Domain::GuessWho).size() == 0);
  }

  TEST_CASE("every artifact carries provenance") {
    TempDir dir;
    const auto spec = parse_spec(kSmallCtp);
    cmd_train(spec, {dir.path, 1});
    cmd_eval(spec, dir.path / "store.txt", {dir.path, 1});
    cmd_gen(spec, {dir.path, 1});
    for (const auto& f : {"store.txt", "history.csv", "episodes.csv", "summary.csv", "edge_frequency.csv", "instance.txt"}) {
      const auto text = slurp(dir.path / f);
      CAPTURE(f);
      CHECK(text.find("# bbpl ") == 0);
      CHECK(text.find("# spec_hash " + spec.hash) != std::string::npos);
      CHECK(text.find("# seed 5") != std::string::npos);
      CHECK(text.find("workers") == std::string::npos);
    }
    CHECK(data_lines(dir.path / "history.csv").size() == 4);
    CHECK(data_lines(dir.path / "summary.csv").size() == 4);  // header, edge, optimistic, prior
  }

  TEST_CASE("train and eval are byte-identical across reruns and worker counts") {
    TempDir dir;
    const auto spec = parse_spec(kSmallCtp);
    const std::pair<const char*, unsigned> runs[] = {{"w1_0", 1}, {"w4_1", 4}, {"w1_1", 1}};
    for (const auto& [name, w] : runs) {
      const auto out = dir.path / name;
      cmd_train(spec, {out, w});
      cmd_eval(spec, out / "store.txt", {out, w});
    }
    for (const auto& f : {"store.txt", "history.csv", "episodes.csv", "summary.csv", "edge_frequency.csv"}) {
      CAPTURE(f);
      CHECK(slurp(dir.path / "w1_0" / f) == slurp(dir.path / "w4_1" / f));
      CHECK(slurp(dir.path / "w1_0" / f) == slurp(dir.path / "w1_1" / f));
    }
  }

  TEST_CASE("eval leaves the store file untouched") {
    TempDir dir;
    const auto spec = parse_spec(kSmallGuessWho);
    cmd_train(spec, {dir.path, 1});
    const auto before = slurp(dir.path / "store.txt");
    const auto stamp = fs::last_write_time(dir.path / "store.txt");
    cmd_eval(spec, dir.path / "store.txt", {dir.path / "eval", 2});
    CHECK(slurp(dir.path / "store.txt") == before);
    CHECK(fs::last_write_time(dir.path / "store.txt") == stamp);
    const auto rows = data_lines(dir.path / "eval" / "reward_by_t.csv");
    CHECK(rows.front() == "policy,T,mean_reward,stderr");
    CHECK(rows.size() == 1 + 3 * 2);
  }

  TEST_CASE("store from another domain is rejected") {
    TempDir dir;
    const auto ctp_spec = parse_spec(kSmallCtp);
    cmd_train(ctp_spec, {dir.path, 1});
    const auto gw = parse_spec(kSmallGuessWho);
    CHECK_THROWS_AS(cmd_eval(gw, dir.path / "store.txt", {dir.path / "x", 1}), ValidationError);
    std::ofstream(dir.path / "junk.txt") << "not a store\n";
    CHECK_THROWS_AS(load_store(dir.path / "junk.txt", Domain::Ctp), ValidationError);
  }

  TEST_CASE("optimistic baseline on an all-open instance equals the shortest path") {
    TempDir dir;
    auto spec = parse_spec("domain: ctp\npolicy: optimistic\neval_episodes: 100\nctp: {nodes: 20, radius: 0.3, open_prob: 1.0, instance_seed: 4}\n");
    cmd_eval(spec, {}, {dir.path, 1});
    const auto inst = ctp::generate_instance(20, 0.3, 1.0, 4);
    const double len = ctp::shortest_path(inst, {}, inst.start(), inst.goal()).length;
    const auto rows = data_lines(dir.path / "summary.csv");
    REQUIRE(rows.size() == 2);
    std::istringstream row(rows[1]);
    std::string name, n, mean;
    std::getline(row, name, ',');
    std::getline(row, n, ',');
    std::getline(row, mean, ',');
    CHECK(std::stod(mean) == -len);
  }

  TEST_CASE("random guessing without questions") {
    TempDir dir;
    const auto spec = parse_spec("domain: guesswho\npolicy: random\neval_episodes: 10000\nguesswho: {questions: 0, t_values: [0]}\n");
    cmd_eval(spec, {}, {dir.path, 1});
    const auto rows = data_lines(dir.path / "summary.csv");
    const double mean = std::stod(rows[1].substr(rows[1].find(',', rows[1].find(',') + 1) + 1));
    CHECK(std::abs(mean - 1.0 / 24) < 0.01);
  }

  TEST_CASE("gen writes deterministic instances") {
    TempDir dir;
    const auto spec = parse_spec("domain: ctp\nctp: {nodes: 20, instance_seed: 9}\n");
    cmd_gen(spec, {dir.path / "a", 1});
    cmd_gen(spec, {dir.path / "b", 1});
    CHECK(slurp(dir.path / "a" / "instance.txt") == slurp(dir.path / "b" / "instance.txt"));
    std::ifstream in(dir.path / "a" / "instance.txt");
    CHECK(ctp::read_instance(in).num_nodes() == 20);

    const auto rs = parse_spec("domain: rocksample\nrocksample: {size: 5, rocks: 5, field_seed: 3}\n");
    cmd_gen(rs, {dir.path / "r", 1});
    std::ifstream fin(dir.path / "r" / "field.txt");
    const auto field = rocksample::read_field(fin);
    CHECK(field.size == 5);
    CHECK(field.num_rocks() == 5);

    CHECK_THROWS_AS(cmd_gen(parse_spec("domain: guesswho\n"), {dir.path / "g", 1}), ValidationError);
  }

  TEST_CASE("sweep writes one row per budget and restart") {
    TempDir dir;
    auto spec = parse_spec(kSmallCtp);
    spec.sweep_steps = {1, 2, 5};
    spec.restarts = 2;
    finalize(spec);
    cmd_sweep(spec, {dir.path, 2});
    const auto rows = data_lines(dir.path / "sweep.csv");
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == "steps,restart,mean_reward");
    CHECK(rows[1].rfind("1,0,", 0) == 0);
    CHECK(rows[6].rfind("5,1,", 0) == 0);
    CHECK(slurp(dir.path / "sweep.csv").find("# converged n/a") != std::string::npos);

    spec.sweep_steps.clear();
    CHECK_THROWS_AS(cmd_sweep(spec, {dir.path, 1}), ValidationError);
  }

  TEST_CASE("guesswho sweep also reports baselines by budget") {
    TempDir dir;
    auto spec = parse_spec(kSmallGuessWho);
    spec.sweep_steps = {1, 2};
    spec.restarts = 1;
    finalize(spec);
    cmd_sweep(spec, {dir.path, 1});
    const auto rows = data_lines(dir.path / "convergence.csv");
    CHECK(rows[0] == "policy,steps,mean_reward");
    CHECK(rows.size() == 1 + 2 + 2 * 2);
  }

  TEST_CASE("restart seeds") {
    CHECK(restart_seed(11, 0) == 11);
    CHECK(restart_seed(11, 1) != restart_seed(11, 2));
    CHECK(restart_seed(11, 1) == restart_seed(11, 1));
  }
}
