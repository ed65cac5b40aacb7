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
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bbpl/core/rng.hpp"

namespace bbpl {

enum class FamilyKind {
  Dirichlet,         // learnable, hypers = concentrations (alpha_1..alpha_k)
  Beta,              // learnable, hypers = (a, b)
  NormalMeanLogStd,  // learnable, hypers = (mu, log sigma)
  Categorical,       // fixed, hypers = non-negative weights (normalized on use)
  Bernoulli,         // fixed, hypers = (p)
};

/// Distribution family plus arity. Learnable families carry score gradients
/// with respect to their hyperparameters; fixed families model world and
/// agent noise and never contribute to the gradient.
struct DistFamily {
  FamilyKind kind = FamilyKind::Bernoulli;
  std::size_t arity = 1;
  // NormalMeanLogStd only: keep log sigma at its initial value during training.
  bool fixed_scale = false;

  static DistFamily dirichlet(std::size_t k);
  static DistFamily beta() { return {FamilyKind::Beta, 2, false}; }
  static DistFamily normal(bool fixed_scale = false) { return {FamilyKind::NormalMeanLogStd, 2, fixed_scale}; }
  static DistFamily categorical(std::size_t k);
  static DistFamily bernoulli() { return {FamilyKind::Bernoulli, 1, false}; }

  bool learnable() const;
  // Hyperparameter i is updated by the optimizer.
  bool trainable(std::size_t i) const;
  // Hyperparameter i lives on (0, inf) and is optimized through exp().
  bool positive(std::size_t i) const;

  std::string name() const;
  static DistFamily parse(const std::string& name, std::size_t arity);

  friend bool operator==(const DistFamily&, const DistFamily&) = default;
};

// bool for Bernoulli, index for Categorical, real for Beta/Normal,
// simplex point for Dirichlet.
using Value = std::variant<bool, std::int64_t, double, std::vector<double>>;

struct ScoreResult {
  double log_density = 0.0;
  std::vector<double> grad;  // d log p / d hypers (constrained); empty for fixed families
};

/// Checks hypers against family constraints. Throws std::invalid_argument.
void validate_hypers(const DistFamily& family, std::span<const double> hypers);

/// Log density (mass for discrete families) of value.
/// Throws std::domain_error if value is outside the support.
double log_density(const DistFamily& family, std::span<const double> hypers, const Value& value);

/// Log density together with its gradient with respect to the constrained
/// hyperparameters:
///   Dirichlet  d/d alpha_j = psi(sum alpha) - psi(alpha_j) + log x_j
///   Beta       d/da = psi(a+b) - psi(a) + log x,  d/db = psi(a+b) - psi(b) + log(1-x)
///   Normal     d/d mu = (x-mu)/sigma^2,  d/d log sigma = ((x-mu)/sigma)^2 - 1
ScoreResult score_logpdf_grad(const DistFamily& family, std::span<const double> hypers, const Value& value);

Value sample(const DistFamily& family, std::span<const double> hypers, Rng& rng);

double sample_gamma(double shape, Rng& rng);

}  // namespace bbpl
