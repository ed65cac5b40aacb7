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
#include <map>
#include <span>
#include <vector>

#include "bbpl/core/address.hpp"
#include "bbpl/core/trace.hpp"

namespace bbpl {

enum class Baseline {
  LogWeight,      // b_i = sum g^2 log w / sum g^2
  LiteralWeight,  // b_i = sum g^2 w / sum g^2 (numerator with w itself)
  None,           // b_i = 0
};

struct ComponentEstimate {
  double sum_g_logw = 0.0;
  double sum_g = 0.0;
  double sum_g2_logw = 0.0;
  double sum_g2 = 0.0;
  std::size_t count = 0;  // traces containing the address
  double baseline = 0.0;
  double gradient = 0.0;
};

/// Score-function gradient of the log marginal likelihood for every learnable
/// address seen in a batch, per hyperparameter component.
struct GradientEstimate {
  std::map<Address, std::vector<ComponentEstimate>> entries;
  std::size_t traces = 0;

  // Zero for addresses or components no trace touched.
  double gradient(const Address& addr, std::size_t component) const;
};

/// With the prior as proposal, log w_n = beta * R_n. For each component i
///   b_i = sum_n g_ni^2 log w_n / sum_n g_ni^2
///   grad_i = sum_n g_ni (log w_n - b_i)
/// with sums over the traces that contain the address.
/// Throws std::invalid_argument for beta <= 0 or an empty batch, DataError
/// for non-finite rewards.
GradientEstimate estimate_gradient(std::span<const Trace> traces, double beta, Baseline baseline = Baseline::LogWeight);

}  // namespace bbpl
