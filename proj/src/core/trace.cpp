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

#include "bbpl/core/trace.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bbpl/core/errors.hpp"

namespace bbpl {

TraceContext::TraceContext(const HyperStore& store, std::uint64_t seed, std::size_t action_cap,
                           std::size_t episode_index)
    : store_(store), rng_(seed), action_cap_(action_cap), episode_index_(episode_index) {
  trace_.seed = seed;
}

Value TraceContext::sample(const Address& addr, const DistFamily& family, std::span<const double> init_hypers) {
  if (index_.contains(addr)) {
    throw std::logic_error("trace: address sampled twice in one episode: " + addr.to_string());
  }
  TraceRecord rec{addr, family, Value{}, 0.0, std::nullopt};
  if (family.learnable()) {
    std::span<const double> hypers = init_hypers;
    if (const auto* entry = store_.find(addr)) {
      if (!(entry->family == family)) {
        throw std::logic_error("trace: family mismatch at " + addr.to_string() + " (store has " +
                               entry->family.name() + ", program uses " + family.name() + ")");
      }
      scratch_.resize(family.arity);
      store_.hypers_into(*entry, scratch_);
      hypers = scratch_;
    } else {
      validate_hypers(family, init_hypers);
      trace_.new_entries.push_back({addr, family, std::vector<double>(init_hypers.begin(), init_hypers.end())});
    }
    rec.value = bbpl::sample(family, hypers, rng_);
    auto score = score_logpdf_grad(family, hypers, rec.value);
    rec.log_density = score.log_density;
    rec.grad = std::move(score.grad);
  } else {
    rec.value = bbpl::sample(family, init_hypers, rng_);
    rec.log_density = log_density(family, init_hypers, rec.value);
  }
  index_.emplace(addr, trace_.records.size());
  trace_.records.push_back(std::move(rec));
  return trace_.records.back().value;
}

double TraceContext::sample_real(const Address& addr, const DistFamily& family, std::span<const double> init_hypers) {
  return std::get<double>(sample(addr, family, init_hypers));
}

bool TraceContext::sample_bernoulli(const Address& addr, double p) {
  const double hypers[] = {p};
  return std::get<bool>(sample(addr, DistFamily::bernoulli(), hypers));
}

std::size_t TraceContext::sample_categorical(const Address& addr, std::span<const double> weights) {
  return static_cast<std::size_t>(std::get<std::int64_t>(sample(addr, DistFamily::categorical(weights.size()), weights)));
}

const Value* TraceContext::find(const Address& addr) const {
  auto it = index_.find(addr);
  return it == index_.end() ? nullptr : &trace_.records[it->second].value;
}

void TraceContext::tick() {
  if (++actions_ > action_cap_) {
    throw EpisodeCapExceeded("episode " + std::to_string(episode_index_) + " exceeded its cap of " +
                             std::to_string(action_cap_) + " actions");
  }
}

Trace TraceContext::finish(double reward) && {
  if (!std::isfinite(reward)) throw DataError("episode produced a non-finite reward");
  trace_.reward = reward;
  return std::move(trace_);
}

}  // namespace bbpl
