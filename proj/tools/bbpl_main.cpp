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

// Command-line front end: bbpl train|eval|gen|sweep --config <file>.
//
// Exit status: 0 success, 1 invalid configuration or input files,
// 2 numerical divergence, 3 any other runtime failure.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "bbpl/core/errors.hpp"
#include "bbpl/harness/harness.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  unsigned workers = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Experiment YAML file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Master seed (overrides the config)");
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  cmd->add_option("--workers", c.workers, "Worker threads; never changes results")
      ->capture_default_str()
      ->check(CLI::Range(1u, 1024u));
}

bbpl::harness::ExperimentSpec load(const Common& c) {
  auto spec = bbpl::harness::load_spec(c.config);
  if (c.seed) {
    spec.train.seed = *c.seed;
    bbpl::harness::finalize(spec);
  }
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Policy search by stochastic gradient ascent on prior hyperparameters"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("bbpl ") + BBPL_VERSION);

  Common train_opts, eval_opts, gen_opts, sweep_opts;
  std::string store;
  auto* train = app.add_subcommand("train", "Learn hyperparameters; writes store.txt and history.csv");
  add_common(train, train_opts);
  auto* eval = app.add_subcommand("eval", "Evaluate a frozen policy and its baselines");
  add_common(eval, eval_opts);
  eval->add_option("--store", store, "Trained store (omit to evaluate at the prior)")->check(CLI::ExistingFile);
  auto* gen = app.add_subcommand("gen", "Generate a CTP instance or RockSample field");
  add_common(gen, gen_opts);
  auto* sweep = app.add_subcommand("sweep", "Train and evaluate across step budgets and restarts");
  add_common(sweep, sweep_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; usage errors fold into the validation status.
    return app.exit(e) == 0 ? 0 : 1;
  }

  namespace h = bbpl::harness;
  try {
    auto opts = [](const Common& c) { return h::RunOptions{c.out, c.workers}; };
    if (*train) h::cmd_train(load(train_opts), opts(train_opts));
    if (*eval) h::cmd_eval(load(eval_opts), store, opts(eval_opts));
    if (*gen) h::cmd_gen(load(gen_opts), opts(gen_opts));
    if (*sweep) h::cmd_sweep(load(sweep_opts), opts(sweep_opts));
  } catch (const bbpl::ValidationError& e) {
    std::cerr << "bbpl: invalid input: " << e.what() << '\n';
    return 1;
  } catch (const bbpl::DataError& e) {
    std::cerr << "bbpl: bad data: " << e.what() << '\n';
    return 1;
  } catch (const bbpl::Diverged& e) {
    std::cerr << "bbpl: diverged: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "bbpl: error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
