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
#include <span>
#include <string_view>

namespace bbpl::simd {

// Sums over paired columns (g_n, w_n).
struct Moments {
  double sum_g_w = 0.0;
  double sum_g = 0.0;
  double sum_g2_w = 0.0;
  double sum_g2 = 0.0;
};

/// One implementation of every data-parallel inner loop. The scalar table is
/// the reference; vector tables must agree with it bit-for-bit on the
/// elementwise kernels and within rounding on the reductions.
struct KernelTable {
  std::string_view name;
  Moments (*weighted_moments)(const double* g, const double* w, std::size_t n);
  // sum_n g_n * (w_n - b)
  double (*residual_dot)(const double* g, const double* w, double b, std::size_t n);
  // ms = decay*ms + (1-decay)*grad^2; param += step * grad / sqrt(ms + eps)
  void (*rmsprop_update)(double* param, const double* grad, double* ms, std::size_t n, double step, double decay,
                         double eps);
  // x *= y elementwise; returns sum of the products
  double (*multiply_sum)(double* x, const double* y, std::size_t n);
  void (*scale)(double* x, double s, std::size_t n);
  // max_n x_n * y_n
  double (*max_product)(const double* x, const double* y, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the AVX2 variant is not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

/// Best table for this CPU. BBPL_SIMD=scalar in the environment forces the
/// reference path. Chosen once per process.
const KernelTable& active_kernels();

inline Moments weighted_moments(std::span<const double> g, std::span<const double> w) {
  return active_kernels().weighted_moments(g.data(), w.data(), g.size());
}
inline double residual_dot(std::span<const double> g, std::span<const double> w, double b) {
  return active_kernels().residual_dot(g.data(), w.data(), b, g.size());
}
inline void rmsprop_update(std::span<double> param, std::span<const double> grad, std::span<double> ms, double step,
                           double decay, double eps) {
  active_kernels().rmsprop_update(param.data(), grad.data(), ms.data(), param.size(), step, decay, eps);
}
inline double multiply_sum(std::span<double> x, std::span<const double> y) {
  return active_kernels().multiply_sum(x.data(), y.data(), x.size());
}
inline void scale(std::span<double> x, double s) { active_kernels().scale(x.data(), s, x.size()); }
inline double max_product(std::span<const double> x, std::span<const double> y) {
  return active_kernels().max_product(x.data(), y.data(), x.size());
}
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active_kernels().dot(x.data(), y.data(), x.size());
}

}  // namespace bbpl::simd
