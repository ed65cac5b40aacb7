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

#include "bbpl/harness/harness.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bbpl/core/errors.hpp"
#include "bbpl/core/rng.hpp"
#include "bbpl/ctp/ctp.hpp"
#include "bbpl/rocksample/rocksample.hpp"

#ifndef BBPL_VERSION
#define BBPL_VERSION "unknown"
#endif

namespace fs = std::filesystem;

namespace bbpl::harness {

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string hex64(std::uint64_t x) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, x >>= 4) s[static_cast<std::size_t>(i)] = digits[x & 0xF];
  return s;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string baseline_name(Baseline b) {
  switch (b) {
    case Baseline::LogWeight: return "log-weight";
    case Baseline::LiteralWeight: return "literal-weight";
    case Baseline::None: return "none";
  }
  return "?";
}

Baseline parse_baseline(const std::string& s) {
  if (s == "log-weight") return Baseline::LogWeight;
  if (s == "literal-weight") return Baseline::LiteralWeight;
  if (s == "none") return Baseline::None;
  throw ValidationError("control_variate: expected log-weight, literal-weight or none, got '" + s + "'");
}

// --- YAML reading -----------------------------------------------------------

void check_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ValidationError(where + ": expected a mapping");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) throw ValidationError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const YAML::Node& node, const char* key, T& out) {
  const auto v = node[key];
  if (!v) return;
  try {
    out = v.as<T>();
  } catch (const YAML::Exception&) {
    throw ValidationError(std::string("config: bad value for '") + key + "'");
  }
}

std::string resolve(const std::string& p, const fs::path& base) {
  if (p.empty()) return p;
  fs::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal().string();
}

void require_file(const std::string& path, const char* what) {
  if (!path.empty() && !fs::is_regular_file(path)) throw ValidationError(std::string(what) + ": no such file '" + path + "'");
}

std::string default_policy(Domain d) {
  switch (d) {
    case Domain::Ctp: return "edge";
    case Domain::RockSample:
    case Domain::GuessWho: return "learned";
  }
  return "";
}

void validate_policy_name(Domain d, const std::string& name, bool allow_prior) {
  if (allow_prior && name == "prior") return;
  switch (d) {
    case Domain::Ctp: ctp::parse_policy(name); break;
    case Domain::RockSample: rocksample::parse_policy(name); break;
    case Domain::GuessWho: guesswho::parse_policy(name); break;
  }
}

// --- domain wiring ----------------------------------------------------------

ctp::Instance load_instance(const ExperimentSpec& spec) {
  const auto& c = spec.ctp;
  auto inst = [&] {
    if (c.instance.empty()) return ctp::generate_instance(c.nodes, c.radius, c.open_prob, c.instance_seed);
    std::ifstream in(c.instance);
    if (!in) throw ValidationError("ctp: cannot open '" + c.instance + "'");
    return ctp::read_instance(in);
  }();
  if (c.open_override) inst = inst.with_open_prob(*c.open_override);
  return inst;
}

rocksample::RockField load_field(const ExperimentSpec& spec) {
  const auto& r = spec.rocksample;
  if (r.field.empty()) return rocksample::make_field(r.size, r.rocks, r.field_seed);
  std::ifstream in(r.field);
  if (!in) throw ValidationError("rocksample: cannot open '" + r.field + "'");
  return rocksample::read_field(in);
}

guesswho::Ontology load_gw_ontology(const ExperimentSpec& spec) {
  if (spec.guesswho.ontology.empty()) return guesswho::Ontology::standard();
  return guesswho::load_ontology(spec.guesswho.ontology);
}

// A loaded world plus the policies that can run on it. "prior" maps to the
// learnable policy; the caller passes an empty store for it.
struct World {
  Domain domain;
  std::optional<ctp::Instance> instance;
  std::optional<rocksample::RockField> field;
  std::optional<guesswho::Ontology> ontology;

  explicit World(const ExperimentSpec& spec) : domain(spec.domain) {
    switch (domain) {
      case Domain::Ctp: instance = load_instance(spec); break;
      case Domain::RockSample: field = load_field(spec); break;
      case Domain::GuessWho: ontology = load_gw_ontology(spec); break;
    }
  }

  std::string resolve_policy(const ExperimentSpec& spec, const std::string& name) const {
    return name == "prior" ? spec.policy : name;
  }

  EpisodeProgram program(const ExperimentSpec& spec, const std::string& name, std::size_t questions,
                         std::vector<ctp::Trajectory>* trajectories = nullptr,
                         std::vector<rocksample::Outcome>* outcomes = nullptr) const {
    const auto policy = resolve_policy(spec, name);
    switch (domain) {
      case Domain::Ctp: return ctp::make_program(*instance, ctp::parse_policy(policy), trajectories);
      case Domain::RockSample:
        return rocksample::make_program(*field, rocksample::parse_policy(policy), std::nullopt, outcomes);
      case Domain::GuessWho: {
        auto settings = spec.guesswho.episode;
        settings.questions = questions;
        return guesswho::make_program(*ontology, guesswho::parse_policy(policy), settings);
      }
    }
    throw std::logic_error("unreachable");
  }

  EpisodeProgram program(const ExperimentSpec& spec, const std::string& name) const {
    return program(spec, name, spec.guesswho.episode.questions);
  }
};

std::set<std::string> learnable_tags(Domain d) {
  switch (d) {
    case Domain::Ctp: return {"Q"};
    case Domain::RockSample: return {"move"};
    case Domain::GuessWho: return {"A", "gamma"};
  }
  return {};
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void write_header(std::ostream& os, const ExperimentSpec& spec) {
  for (const auto& line : provenance(spec)) os << "# " << line << '\n';
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());
}

TrainConfig train_config(const ExperimentSpec& spec, const RunOptions& opts) {
  auto cfg = spec.train;
  cfg.workers = std::max(1u, opts.workers);
  return cfg;
}

}  // namespace

Domain parse_domain(const std::string& name) {
  if (name == "ctp") return Domain::Ctp;
  if (name == "rocksample") return Domain::RockSample;
  if (name == "guesswho") return Domain::GuessWho;
  throw ValidationError("domain: expected ctp, rocksample or guesswho, got '" + name + "'");
}

std::string domain_name(Domain d) {
  switch (d) {
    case Domain::Ctp: return "ctp";
    case Domain::RockSample: return "rocksample";
    case Domain::GuessWho: return "guesswho";
  }
  return "?";
}

ExperimentSpec parse_spec(const std::string& yaml_text, const fs::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  check_keys(root, "config",
             {"domain", "policy", "seed", "samples_per_step", "steps", "beta", "control_variate", "rho0", "tau",
              "kappa", "rmsprop_decay", "epsilon", "eval_episodes", "baselines", "sweep_steps", "restarts",
              "convergence_tolerance", "ctp", "rocksample", "guesswho"});

  ExperimentSpec spec;
  std::string domain;
  read(root, "domain", domain);
  if (domain.empty()) throw ValidationError("config: 'domain' is required");
  spec.domain = parse_domain(domain);
  spec.policy = default_policy(spec.domain);
  read(root, "policy", spec.policy);

  auto& t = spec.train;
  read(root, "seed", t.seed);
  read(root, "samples_per_step", t.samples_per_step);
  read(root, "steps", t.steps);
  read(root, "beta", t.beta);
  std::string cv = baseline_name(t.baseline);
  read(root, "control_variate", cv);
  t.baseline = parse_baseline(cv);
  read(root, "rho0", t.optimizer.rho0);
  read(root, "tau", t.optimizer.tau);
  read(root, "kappa", t.optimizer.kappa);
  read(root, "rmsprop_decay", t.optimizer.decay);
  read(root, "epsilon", t.optimizer.epsilon);
  read(root, "eval_episodes", spec.eval_episodes);
  read(root, "baselines", spec.baselines);
  read(root, "sweep_steps", spec.sweep_steps);
  read(root, "restarts", spec.restarts);
  read(root, "convergence_tolerance", spec.convergence_tolerance);

  if (const auto n = root["ctp"]) {
    check_keys(n, "ctp", {"instance", "nodes", "radius", "open_prob", "open_override", "instance_seed"});
    auto& c = spec.ctp;
    read(n, "instance", c.instance);
    read(n, "nodes", c.nodes);
    read(n, "radius", c.radius);
    read(n, "open_prob", c.open_prob);
    if (n["open_override"]) {
      double p = 0;
      read(n, "open_override", p);
      c.open_override = p;
    }
    read(n, "instance_seed", c.instance_seed);
    c.instance = resolve(c.instance, base_dir);
  }
  if (const auto n = root["rocksample"]) {
    check_keys(n, "rocksample", {"field", "size", "rocks", "field_seed"});
    auto& r = spec.rocksample;
    read(n, "field", r.field);
    read(n, "size", r.size);
    read(n, "rocks", r.rocks);
    read(n, "field_seed", r.field_seed);
    r.field = resolve(r.field, base_dir);
  }
  if (const auto n = root["guesswho"]) {
    check_keys(n, "guesswho",
               {"ontology", "questions", "accuracy", "a_log_scale", "learn_a_scale", "gamma_log_scale",
                "learn_gamma_scale", "t_values"});
    auto& g = spec.guesswho;
    read(n, "ontology", g.ontology);
    read(n, "questions", g.episode.questions);
    read(n, "accuracy", g.episode.accuracy);
    read(n, "a_log_scale", g.episode.learned.a_log_scale);
    read(n, "learn_a_scale", g.episode.learned.learn_a_scale);
    read(n, "gamma_log_scale", g.episode.learned.gamma_log_scale);
    read(n, "learn_gamma_scale", g.episode.learned.learn_gamma_scale);
    read(n, "t_values", g.t_values);
    g.ontology = resolve(g.ontology, base_dir);
  }

  finalize(spec);
  return spec;
}

ExperimentSpec load_spec(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("config: cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), path.parent_path());
}

void finalize(ExperimentSpec& spec) {
  const auto& t = spec.train;
  auto fail = [](const std::string& m) { throw ValidationError("config: " + m); };
  validate_policy_name(spec.domain, spec.policy, false);
  for (const auto& b : spec.baselines) validate_policy_name(spec.domain, b, true);
  if (t.samples_per_step < 2) fail("samples_per_step must be >= 2");
  if (!(t.beta > 0.0) || !std::isfinite(t.beta)) fail("beta must be positive and finite");
  const auto& o = t.optimizer;
  if (!(o.rho0 > 0.0) || !std::isfinite(o.rho0)) fail("rho0 must be positive");
  if (!(o.tau > 0.0) || !std::isfinite(o.tau)) fail("tau must be positive");
  if (!(o.kappa >= 0.0 && o.kappa <= 1.0)) fail("kappa must be in [0, 1]");
  if (!(o.decay >= 0.0 && o.decay < 1.0)) fail("rmsprop_decay must be in [0, 1)");
  if (!(o.epsilon > 0.0)) fail("epsilon must be positive");
  if (spec.eval_episodes < 1) fail("eval_episodes must be >= 1");
  if (spec.restarts < 1) fail("restarts must be >= 1");
  if (!(spec.convergence_tolerance >= 0.0)) fail("convergence_tolerance must be >= 0");

  const auto& c = spec.ctp;
  if (c.nodes < 2) fail("ctp.nodes must be >= 2");
  if (!(c.radius > 0.0)) fail("ctp.radius must be positive");
  if (!(c.open_prob > 0.0 && c.open_prob <= 1.0)) fail("ctp.open_prob must be in (0, 1]");
  if (c.open_override && !(*c.open_override > 0.0 && *c.open_override <= 1.0))
    fail("ctp.open_override must be in (0, 1]");
  const auto& r = spec.rocksample;
  if (r.size < 1) fail("rocksample.size must be >= 1");
  if (r.rocks < 0) fail("rocksample.rocks must be >= 0");
  const auto& g = spec.guesswho;
  if (!(g.episode.accuracy > 0.5 && g.episode.accuracy <= 1.0)) fail("guesswho.accuracy must be in (0.5, 1]");
  if (g.t_values.empty()) fail("guesswho.t_values must not be empty");

  require_file(c.instance, "ctp.instance");
  require_file(r.field, "rocksample.field");
  require_file(g.ontology, "guesswho.ontology");

  spec.hash = hex64(fnv1a(canonical_form(spec)));
}

std::string canonical_form(const ExperimentSpec& spec) {
  std::ostringstream os;
  const auto& t = spec.train;
  os << "domain=" << domain_name(spec.domain) << '\n'
     << "policy=" << spec.policy << '\n'
     << "seed=" << t.seed << '\n'
     << "samples_per_step=" << t.samples_per_step << '\n'
     << "steps=" << t.steps << '\n'
     << "beta=" << num(t.beta) << '\n'
     << "control_variate=" << baseline_name(t.baseline) << '\n'
     << "rho0=" << num(t.optimizer.rho0) << '\n'
     << "tau=" << num(t.optimizer.tau) << '\n'
     << "kappa=" << num(t.optimizer.kappa) << '\n'
     << "rmsprop_decay=" << num(t.optimizer.decay) << '\n'
     << "epsilon=" << num(t.optimizer.epsilon) << '\n'
     << "eval_episodes=" << spec.eval_episodes << '\n';
  os << "baselines=";
  for (const auto& b : spec.baselines) os << b << ',';
  os << "\nsweep_steps=";
  for (auto s : spec.sweep_steps) os << s << ',';
  os << "\nrestarts=" << spec.restarts << '\n' << "convergence_tolerance=" << num(spec.convergence_tolerance) << '\n';
  switch (spec.domain) {
    case Domain::Ctp: {
      const auto& c = spec.ctp;
      os << "ctp.instance=" << c.instance << '\n'
         << "ctp.nodes=" << c.nodes << '\n'
         << "ctp.radius=" << num(c.radius) << '\n'
         << "ctp.open_prob=" << num(c.open_prob) << '\n'
         << "ctp.open_override=" << (c.open_override ? num(*c.open_override) : "none") << '\n'
         << "ctp.instance_seed=" << c.instance_seed << '\n';
      break;
    }
    case Domain::RockSample: {
      const auto& r = spec.rocksample;
      os << "rocksample.field=" << r.field << '\n'
         << "rocksample.size=" << r.size << '\n'
         << "rocksample.rocks=" << r.rocks << '\n'
         << "rocksample.field_seed=" << r.field_seed << '\n';
      break;
    }
    case Domain::GuessWho: {
      const auto& g = spec.guesswho;
      const auto& l = g.episode.learned;
      os << "guesswho.ontology=" << g.ontology << '\n'
         << "guesswho.questions=" << g.episode.questions << '\n'
         << "guesswho.accuracy=" << num(g.episode.accuracy) << '\n'
         << "guesswho.a_log_scale=" << num(l.a_log_scale) << '\n'
         << "guesswho.learn_a_scale=" << l.learn_a_scale << '\n'
         << "guesswho.gamma_log_scale=" << num(l.gamma_log_scale) << '\n'
         << "guesswho.learn_gamma_scale=" << l.learn_gamma_scale << '\n'
         << "guesswho.t_values=";
      for (auto v : g.t_values) os << v << ',';
      os << '\n';
      break;
    }
  }
  return os.str();
}

std::vector<std::string> provenance(const ExperimentSpec& spec) {
  return {std::string("bbpl ") + BBPL_VERSION, "spec_hash " + spec.hash, "seed " + std::to_string(spec.train.seed),
          "domain " + domain_name(spec.domain) + " policy " + spec.policy};
}

std::uint64_t restart_seed(std::uint64_t master, std::size_t restart) {
  return restart == 0 ? master : splitmix64(master ^ splitmix64(0x5eed0000ULL + restart));
}

HyperStore load_store(const fs::path& path, Domain domain) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("store: cannot open '" + path.string() + "'");
  HyperStore store;
  try {
    store = read_hyperstore(in);
  } catch (const DataError& e) {
    throw ValidationError(std::string("store: ") + e.what());
  }
  const auto tags = learnable_tags(domain);
  for (const auto& [addr, entry] : store) {
    if (!tags.count(addr.tag()))
      throw ValidationError("store: address " + addr.to_string() + " does not belong to domain " + domain_name(domain));
  }
  return store;
}

void cmd_train(const ExperimentSpec& spec, const RunOptions& opts) {
  ensure_dir(opts.out);
  const World world(spec);
  TrainResult result;
  if (spec.train.steps > 0) result = train(world.program(spec, spec.policy), train_config(spec, opts));

  auto store_out = open_output(opts.out / "store.txt");
  write_hyperstore(store_out, result.store, provenance(spec));

  auto hist = open_output(opts.out / "history.csv");
  write_header(hist, spec);
  hist << "step,mean_reward,stderr\n";
  for (std::size_t k = 0; k < result.history.size(); ++k)
    hist << k << ',' << num(result.history[k].mean_reward) << ',' << num(result.history[k].stderr_reward) << '\n';
}

void cmd_eval(const ExperimentSpec& spec, const fs::path& store_path, const RunOptions& opts) {
  ensure_dir(opts.out);
  const World world(spec);
  const HyperStore store = store_path.empty() ? HyperStore{} : load_store(store_path, spec.domain);
  const HyperStore prior;
  const unsigned workers = std::max(1u, opts.workers);
  const auto n = spec.eval_episodes;
  const auto seed = spec.train.seed;

  std::vector<std::string> policies{spec.policy};
  for (const auto& b : spec.baselines)
    if (b != spec.policy) policies.push_back(b);
  auto store_for = [&](const std::string& name) -> const HyperStore& { return name == "prior" ? prior : store; };

  auto episodes = open_output(opts.out / "episodes.csv");
  write_header(episodes, spec);
  episodes << "policy,episode,reward\n";
  auto summary = open_output(opts.out / "summary.csv");
  write_header(summary, spec);
  summary << "policy,episodes,mean_reward,stderr\n";

  for (const auto& name : policies) {
    std::vector<ctp::Trajectory> trajectories;
    std::vector<rocksample::Outcome> outcomes;
    const bool main = name == spec.policy;
    if (main && spec.domain == Domain::Ctp) trajectories.resize(n);
    if (main && spec.domain == Domain::RockSample) outcomes.resize(n);
    const auto program = world.program(spec, name, spec.guesswho.episode.questions,
                                       trajectories.empty() ? nullptr : &trajectories,
                                       outcomes.empty() ? nullptr : &outcomes);
    const auto result = evaluate(program, store_for(name), n, seed, workers);
    for (std::size_t j = 0; j < n; ++j) episodes << name << ',' << j << ',' << num(result.rewards[j]) << '\n';
    summary << name << ',' << n << ',' << num(result.stats.mean_reward) << ',' << num(result.stats.stderr_reward) << '\n';

    if (!trajectories.empty()) {
      auto out = open_output(opts.out / "edge_frequency.csv");
      write_header(out, spec);
      const auto counts = ctp::edge_frequency(*world.instance, trajectories);
      ctp::write_edge_frequency(out, counts);
    }
    if (!outcomes.empty()) {
      auto out = open_output(opts.out / "transitions.csv");
      write_header(out, spec);
      const auto counts = rocksample::transition_frequency(outcomes);
      rocksample::write_transition_frequency(out, counts, n);
    }
  }

  if (spec.domain == Domain::GuessWho) {
    auto out = open_output(opts.out / "reward_by_t.csv");
    write_header(out, spec);
    out << "policy,T,mean_reward,stderr\n";
    for (const auto& name : policies) {
      for (auto t : spec.guesswho.t_values) {
        const auto r = evaluate(world.program(spec, name, t), store_for(name), n, seed, workers);
        out << name << ',' << t << ',' << num(r.stats.mean_reward) << ',' << num(r.stats.stderr_reward) << '\n';
      }
    }
  }
}

void cmd_gen(const ExperimentSpec& spec, const RunOptions& opts) {
  ensure_dir(opts.out);
  std::vector<std::string> comments = provenance(spec);
  switch (spec.domain) {
    case Domain::Ctp: {
      const auto inst = load_instance(spec);
      auto out = open_output(opts.out / "instance.txt");
      ctp::write_instance(out, inst, comments);
      return;
    }
    case Domain::RockSample: {
      const auto field = load_field(spec);
      auto out = open_output(opts.out / "field.txt");
      rocksample::write_field(out, field, comments);
      return;
    }
    case Domain::GuessWho:
      throw ValidationError("gen: guesswho has no generator (the ontology is a fixed data file)");
  }
}

void cmd_sweep(const ExperimentSpec& spec, const RunOptions& opts) {
  if (spec.sweep_steps.empty()) throw ValidationError("sweep: sweep_steps must not be empty");
  ensure_dir(opts.out);
  const World world(spec);
  const auto program = world.program(spec, spec.policy);
  const unsigned workers = std::max(1u, opts.workers);

  auto out = open_output(opts.out / "sweep.csv");
  write_header(out, spec);
  out << "steps,restart,mean_reward\n";

  struct Row {
    std::size_t steps, restart;
    double mean;
  };
  std::vector<Row> rows;
  std::vector<std::string> failures;
  for (auto steps : spec.sweep_steps) {
    for (std::size_t r = 0; r < spec.restarts; ++r) {
      auto cfg = train_config(spec, opts);
      cfg.steps = steps;
      cfg.seed = restart_seed(spec.train.seed, r);
      double mean = std::nan("");
      try {
        const auto trained = train(program, cfg);
        mean = evaluate(program, trained.store, spec.eval_episodes, cfg.seed, workers).stats.mean_reward;
      } catch (const std::exception& e) {
        failures.push_back("failed steps=" + std::to_string(steps) + " restart=" + std::to_string(r) + ": " + e.what());
      }
      rows.push_back({steps, r, mean});
      out << steps << ',' << r << ',' << num(mean) << '\n';
      out.flush();
    }
  }

  // Convergence: every restart trained for more than 100 steps lands within a
  // relative band around their common mean.
  double sum = 0.0;
  std::size_t late = 0;
  bool finite = true;
  for (const auto& row : rows) {
    if (row.steps <= 100) continue;
    ++late;
    finite = finite && std::isfinite(row.mean);
    sum += row.mean;
  }
  std::string flag = "n/a";
  if (late > 0) {
    bool ok = finite;
    const double centre = sum / static_cast<double>(late);
    for (const auto& row : rows)
      if (row.steps > 100 && ok) ok = std::abs(row.mean - centre) <= spec.convergence_tolerance * std::abs(centre);
    flag = ok ? "true" : "false";
  }
  for (const auto& f : failures) out << "# " << f << '\n';
  out << "# converged " << flag << '\n';

  if (spec.domain == Domain::GuessWho) {
    auto conv = open_output(opts.out / "convergence.csv");
    write_header(conv, spec);
    conv << "policy,steps,mean_reward\n";
    for (const auto& row : rows) conv << spec.policy << ',' << row.steps << ',' << num(row.mean) << '\n';
    for (const auto& b : spec.baselines) {
      if (b == spec.policy) continue;
      const auto mean = evaluate(world.program(spec, b), HyperStore{}, spec.eval_episodes, spec.train.seed, workers)
                            .stats.mean_reward;
      for (auto steps : spec.sweep_steps) conv << b << ',' << steps << ',' << num(mean) << '\n';
    }
  }
}

}  // namespace bbpl::harness
