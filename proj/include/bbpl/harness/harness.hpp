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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bbpl/core/train.hpp"
#include "bbpl/guesswho/guesswho.hpp"

namespace bbpl::harness {

enum class Domain { Ctp, RockSample, GuessWho };

Domain parse_domain(const std::string& name);
std::string domain_name(Domain d);

struct CtpParams {
  std::string instance;  // file; generated from the fields below when empty
  std::size_t nodes = 20;
  double radius = 0.3;
  double open_prob = 1.0;
  std::optional<double> open_override;  // replaces every p(e) after loading
  std::uint64_t instance_seed = 1;
};

struct RockSampleParams {
  std::string field;  // file; generated when empty
  int size = 5;
  int rocks = 5;
  std::uint64_t field_seed = 1;
};

struct GuessWhoParams {
  std::string ontology;  // file; the built-in table when empty
  guesswho::EpisodeSettings episode;
  std::vector<std::size_t> t_values = {0, 1, 2, 3, 4, 5, 6};
};

struct ExperimentSpec {
  Domain domain = Domain::Ctp;
  std::string policy;
  TrainConfig train;
  std::size_t eval_episodes = 1000;
  std::vector<std::string> baselines;
  std::vector<std::size_t> sweep_steps = {1, 2, 5, 10, 20, 50, 100, 200};
  std::size_t restarts = 5;
  double convergence_tolerance = 0.1;

  CtpParams ctp;
  RockSampleParams rocksample;
  GuessWhoParams guesswho;

  // FNV-1a over the canonical form, filled in by load/finalize.
  std::string hash;
};

/// Reads a YAML experiment file. Relative file paths resolve against the
/// config's directory. Unknown keys and out-of-range values are
/// ValidationErrors; missing referenced files too.
ExperimentSpec load_spec(const std::filesystem::path& path);
ExperimentSpec parse_spec(const std::string& yaml_text, const std::filesystem::path& base_dir = {});

/// Checks invariants and recomputes the hash. Call after overriding fields.
void finalize(ExperimentSpec& spec);

/// Deterministic text form of every result-affecting field. The worker count
/// is deliberately excluded.
std::string canonical_form(const ExperimentSpec& spec);

struct RunOptions {
  std::filesystem::path out = ".";
  unsigned workers = 1;
};

/// Header lines written (as '#' comments) at the top of every artifact.
std::vector<std::string> provenance(const ExperimentSpec& spec);

// Outputs: store.txt, history.csv ("step,mean_reward,stderr").
void cmd_train(const ExperimentSpec& spec, const RunOptions& opts);

// Outputs: episodes.csv, summary.csv, plus edge_frequency.csv (ctp),
// transitions.csv (rocksample) or reward_by_t.csv (guesswho). The store is
// only read; an empty path evaluates the policy at its prior.
void cmd_eval(const ExperimentSpec& spec, const std::filesystem::path& store_path, const RunOptions& opts);

// Outputs: instance.txt (ctp) or field.txt (rocksample).
void cmd_gen(const ExperimentSpec& spec, const RunOptions& opts);

// Outputs: sweep.csv ("steps,restart,mean_reward"); for guesswho also
// convergence.csv ("policy,steps,mean_reward").
void cmd_sweep(const ExperimentSpec& spec, const RunOptions& opts);

/// Raised by cmd_eval when a store does not belong to the spec's domain.
HyperStore load_store(const std::filesystem::path& path, Domain domain);

// Seed for sweep restart r; restart 0 reuses the master seed.
std::uint64_t restart_seed(std::uint64_t master, std::size_t restart);

}  // namespace bbpl::harness
