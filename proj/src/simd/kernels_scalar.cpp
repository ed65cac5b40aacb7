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

#include <algorithm>
#include <cmath>
#include <limits>

#include "bbpl/simd/kernels.hpp"

namespace bbpl::simd {
namespace {

Moments weighted_moments_ref(const double* g, const double* w, std::size_t n) {
  Moments m;
  for (std::size_t i = 0; i < n; ++i) {
    const double g2 = g[i] * g[i];
    m.sum_g_w += g[i] * w[i];
    m.sum_g += g[i];
    m.sum_g2_w += g2 * w[i];
    m.sum_g2 += g2;
  }
  return m;
}

double residual_dot_ref(const double* g, const double* w, double b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += g[i] * (w[i] - b);
  return acc;
}

void rmsprop_update_ref(double* param, const double* grad, double* ms, std::size_t n, double step, double decay,
                        double eps) {
  const double keep = 1.0 - decay;
  for (std::size_t i = 0; i < n; ++i) {
    ms[i] = decay * ms[i] + keep * (grad[i] * grad[i]);
    param[i] = param[i] + step * (grad[i] / std::sqrt(ms[i] + eps));
  }
}

double multiply_sum_ref(double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] *= y[i];
    acc += x[i];
  }
  return acc;
}

void scale_ref(double* x, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

double max_product_ref(const double* x, const double* y, std::size_t n) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, x[i] * y[i]);
  return best;
}

double dot_ref(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      "scalar",         weighted_moments_ref, residual_dot_ref, rmsprop_update_ref, multiply_sum_ref, scale_ref,
      max_product_ref,  dot_ref,
  };
  return table;
}

}  // namespace bbpl::simd
