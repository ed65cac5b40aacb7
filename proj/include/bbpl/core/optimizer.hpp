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

#include <cstdint>
#include <vector>

#include "bbpl/core/estimator.hpp"
#include "bbpl/core/hyperstore.hpp"

namespace bbpl {

struct OptimizerSettings {
  double rho0 = 0.1;   // base rate
  double tau = 1.0;    // schedule offset
  double kappa = 0.5;  // schedule exponent
  double decay = 0.9;  // RMSProp mean-square decay
  double epsilon = 1e-8;
};

/// RMSProp-normalized stochastic gradient ascent with step sizes
/// rate_k = rho0 / (tau + k)^kappa.
struct OptimState {
  OptimizerSettings settings;
  std::vector<double> mean_square;  // aligned with HyperStore::raw()
  std::uint64_t step = 0;

  double step_size() const { return step_size_at(step); }
  double step_size_at(std::uint64_t k) const;
};

// g / sqrt(decay*v + (1-decay)*g^2 + eps): the normalized direction for one component.
double rmsprop_direction(double g, double v, double decay, double epsilon);

/// One ascent step on the store's unconstrained parameters.
///
/// Constrained gradients are chain-ruled through lambda = exp(rho) (factor
/// lambda) for positive components; frozen components receive zero. If any
/// updated value is non-finite, throws Diverged and leaves store and state
/// untouched.
void optim_step(OptimState& state, HyperStore& store, const GradientEstimate& grad);

}  // namespace bbpl
