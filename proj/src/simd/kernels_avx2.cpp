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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "bbpl/simd/kernels.hpp"

namespace bbpl::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sw = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sw));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d sw = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, sw));
}

Moments weighted_moments_avx2(const double* g, const double* w, std::size_t n) {
  __m256d a_gw = _mm256_setzero_pd();
  __m256d a_g = _mm256_setzero_pd();
  __m256d a_g2w = _mm256_setzero_pd();
  __m256d a_g2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vg = _mm256_loadu_pd(g + i);
    const __m256d vw = _mm256_loadu_pd(w + i);
    const __m256d g2 = _mm256_mul_pd(vg, vg);
    a_gw = _mm256_fmadd_pd(vg, vw, a_gw);
    a_g = _mm256_add_pd(a_g, vg);
    a_g2w = _mm256_fmadd_pd(g2, vw, a_g2w);
    a_g2 = _mm256_add_pd(a_g2, g2);
  }
  Moments m{hsum(a_gw), hsum(a_g), hsum(a_g2w), hsum(a_g2)};
  for (; i < n; ++i) {
    const double g2 = g[i] * g[i];
    m.sum_g_w += g[i] * w[i];
    m.sum_g += g[i];
    m.sum_g2_w += g2 * w[i];
    m.sum_g2 += g2;
  }
  return m;
}

double residual_dot_avx2(const double* g, const double* w, double b, std::size_t n) {
  const __m256d vb = _mm256_set1_pd(b);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(w + i), vb);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(g + i), r, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += g[i] * (w[i] - b);
  return s;
}

// No FMA here: elementwise results must match the scalar path exactly.
void rmsprop_update_avx2(double* param, const double* grad, double* ms, std::size_t n, double step, double decay,
                         double eps) {
  const __m256d vdecay = _mm256_set1_pd(decay);
  const __m256d vkeep = _mm256_set1_pd(1.0 - decay);
  const __m256d vstep = _mm256_set1_pd(step);
  const __m256d veps = _mm256_set1_pd(eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vg = _mm256_loadu_pd(grad + i);
    __m256d vm = _mm256_loadu_pd(ms + i);
    vm = _mm256_add_pd(_mm256_mul_pd(vdecay, vm), _mm256_mul_pd(vkeep, _mm256_mul_pd(vg, vg)));
    _mm256_storeu_pd(ms + i, vm);
    const __m256d dir = _mm256_div_pd(vg, _mm256_sqrt_pd(_mm256_add_pd(vm, veps)));
    _mm256_storeu_pd(param + i, _mm256_add_pd(_mm256_loadu_pd(param + i), _mm256_mul_pd(vstep, dir)));
  }
  const double keep = 1.0 - decay;
  for (; i < n; ++i) {
    ms[i] = decay * ms[i] + keep * (grad[i] * grad[i]);
    param[i] = param[i] + step * (grad[i] / std::sqrt(ms[i] + eps));
  }
}

double multiply_sum_avx2(double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(x + i, p);
    acc = _mm256_add_pd(acc, p);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    x[i] *= y[i];
    s += x[i];
  }
  return s;
}

void scale_avx2(double* x, double s, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vs));
  for (; i < n; ++i) x[i] *= s;
}

double max_product_avx2(const double* x, const double* y, std::size_t n) {
  __m256d best = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    best = _mm256_max_pd(best, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  double m = hmax(best);
  for (; i < n; ++i) m = std::max(m, x[i] * y[i]);
  return m;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{
      "avx2",           weighted_moments_avx2, residual_dot_avx2, rmsprop_update_avx2, multiply_sum_avx2, scale_avx2,
      max_product_avx2, dot_avx2,
  };
  return table;
}

}  // namespace bbpl::simd
