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
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bbpl/core/address.hpp"
#include "bbpl/core/distributions.hpp"
#include "bbpl/core/hyperstore.hpp"
#include "bbpl/core/rng.hpp"

namespace bbpl {

struct TraceRecord {
  Address address;
  DistFamily family;
  Value value;
  double log_density = 0.0;
  // Score gradient w.r.t. constrained hypers; learnable families only.
  std::optional<std::vector<double>> grad;
};

struct NewEntry {
  Address address;
  DistFamily family;
  std::vector<double> hypers;
};

/// Every random choice made in one episode, plus its reward.
struct Trace {
  std::vector<TraceRecord> records;
  double reward = 0.0;
  std::uint64_t seed = 0;
  // Learnable addresses missing from the store when sampled, with the
  // initial hypers used. Merged into the store after the batch.
  std::vector<NewEntry> new_entries;
};

/// Per-episode sampling context. Reads hypers from a store that is frozen for
/// the duration of the episode; lazily created addresses are reported through
/// Trace::new_entries instead of mutating the store.
class TraceContext {
 public:
  TraceContext(const HyperStore& store, std::uint64_t seed, std::size_t action_cap, std::size_t episode_index = 0);

  TraceContext(const TraceContext&) = delete;
  TraceContext& operator=(const TraceContext&) = delete;

  /// Draws a value for addr and appends a trace record.
  ///
  /// Learnable families read hypers from the store, falling back to
  /// init_hypers for unseen addresses. Fixed families always use init_hypers.
  /// Throws std::logic_error on a repeated address or a family that disagrees
  /// with the store entry.
  Value sample(const Address& addr, const DistFamily& family, std::span<const double> init_hypers);

  double sample_real(const Address& addr, const DistFamily& family, std::span<const double> init_hypers);
  bool sample_bernoulli(const Address& addr, double p);
  std::size_t sample_categorical(const Address& addr, std::span<const double> weights);

  // Value already drawn at addr in this episode, if any.
  const Value* find(const Address& addr) const;

  // Untraced world noise.
  Rng& rng() { return rng_; }

  // Counts one agent action. Throws EpisodeCapExceeded past the cap.
  void tick();
  std::size_t actions() const { return actions_; }
  std::size_t episode_index() const { return episode_index_; }

  const Trace& trace() const { return trace_; }
  Trace finish(double reward) &&;

 private:
  const HyperStore& store_;
  Rng rng_;
  std::size_t action_cap_;
  std::size_t actions_ = 0;
  std::size_t episode_index_;
  Trace trace_;
  std::unordered_map<Address, std::size_t, AddressHash> index_;
  std::vector<double> scratch_;
};

}  // namespace bbpl
