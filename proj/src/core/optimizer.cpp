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

#include "bbpl/core/optimizer.hpp"

#include <cmath>
#include <string>

#include "bbpl/core/errors.hpp"
#include "bbpl/simd/kernels.hpp"

namespace bbpl {

double OptimState::step_size_at(std::uint64_t k) const {
  return settings.rho0 / std::pow(settings.tau + static_cast<double>(k), settings.kappa);
}

double rmsprop_direction(double g, double v, double decay, double epsilon) {
  const double ms = decay * v + (1.0 - decay) * (g * g);
  return g / std::sqrt(ms + epsilon);
}

void optim_step(OptimState& state, HyperStore& store, const GradientEstimate& grad) {
  const std::size_t dim = store.dimension();
  std::vector<double> unconstrained(dim, 0.0);
  for (const auto& [addr, entry] : store) {
    auto it = grad.entries.find(addr);
    if (it == grad.entries.end()) continue;
    for (std::size_t i = 0; i < entry.family.arity; ++i) {
      if (!entry.family.trainable(i) || i >= it->second.size()) continue;
      double g = it->second[i].gradient;
      if (entry.family.positive(i)) g *= std::exp(store.raw()[entry.offset + i]);
      unconstrained[entry.offset + i] = g;
    }
  }

  std::vector<double> params(store.raw().begin(), store.raw().end());
  std::vector<double> ms = state.mean_square;
  ms.resize(dim, 0.0);
  simd::rmsprop_update(params, unconstrained, ms, state.step_size(), state.settings.decay, state.settings.epsilon);

  for (std::size_t j = 0; j < dim; ++j) {
    if (!std::isfinite(params[j]) || !std::isfinite(ms[j])) {
      throw Diverged("optimizer step " + std::to_string(state.step) + " produced a non-finite parameter");
    }
  }
  for (const auto& [addr, entry] : store) {
    for (std::size_t i = 0; i < entry.family.arity; ++i) {
      if (entry.family.positive(i) && !(std::exp(params[entry.offset + i]) > 0.0 &&
                                        std::isfinite(std::exp(params[entry.offset + i])))) {
        throw Diverged("optimizer step " + std::to_string(state.step) + " left " + addr.to_string() +
                       " outside its support");
      }
    }
  }
  std::copy(params.begin(), params.end(), store.raw().begin());
  state.mean_square = std::move(ms);
  ++state.step;
}

}  // namespace bbpl
