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

#include "bbpl/core/estimator.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "bbpl/core/errors.hpp"
#include "bbpl/simd/kernels.hpp"

namespace bbpl {

double GradientEstimate::gradient(const Address& addr, std::size_t component) const {
  auto it = entries.find(addr);
  if (it == entries.end() || component >= it->second.size()) return 0.0;
  return it->second[component].gradient;
}

GradientEstimate estimate_gradient(std::span<const Trace> traces, double beta, Baseline baseline) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("estimate_gradient: beta must be > 0");
  if (traces.empty()) throw std::invalid_argument("estimate_gradient: empty batch");

  std::vector<double> log_w(traces.size());
  for (std::size_t n = 0; n < traces.size(); ++n) {
    if (!std::isfinite(traces[n].reward)) throw DataError("estimate_gradient: non-finite reward");
    log_w[n] = beta * traces[n].reward;
  }

  // Column layout per address: component-major g values, plus the log w of
  // each trace that contains the address, in batch order.
  struct Columns {
    std::size_t arity = 0;
    std::vector<std::size_t> trace_ids;
    std::vector<std::vector<double>> g;
  };
  std::unordered_map<Address, Columns, AddressHash> columns;
  for (std::size_t n = 0; n < traces.size(); ++n) {
    for (const auto& rec : traces[n].records) {
      if (!rec.grad) continue;
      auto& col = columns[rec.address];
      if (col.g.empty()) {
        col.arity = rec.grad->size();
        col.g.resize(col.arity);
      } else if (col.arity != rec.grad->size()) {
        throw std::logic_error("estimate_gradient: arity changed at " + rec.address.to_string());
      }
      col.trace_ids.push_back(n);
      for (std::size_t i = 0; i < col.arity; ++i) col.g[i].push_back((*rec.grad)[i]);
    }
  }

  GradientEstimate out;
  out.traces = traces.size();
  std::vector<double> w_col;
  std::vector<double> lit_col;
  for (auto& [addr, col] : columns) {
    // Centre log w on the first member. The residual log w - b is unchanged,
    // and a lone trace gets b equal to its own log w exactly.
    const double anchor = log_w[col.trace_ids.front()];
    w_col.resize(col.trace_ids.size());
    for (std::size_t k = 0; k < col.trace_ids.size(); ++k) w_col[k] = log_w[col.trace_ids[k]] - anchor;
    if (baseline == Baseline::LiteralWeight) {
      lit_col.resize(w_col.size());
      for (std::size_t k = 0; k < w_col.size(); ++k) lit_col[k] = std::exp(log_w[col.trace_ids[k]]);
    }
    std::vector<ComponentEstimate> comps(col.arity);
    for (std::size_t i = 0; i < col.arity; ++i) {
      const auto m = simd::weighted_moments(col.g[i], w_col);
      auto& c = comps[i];
      c.sum_g_logw = m.sum_g_w + anchor * m.sum_g;
      c.sum_g = m.sum_g;
      c.sum_g2_logw = m.sum_g2_w + anchor * m.sum_g2;
      c.sum_g2 = m.sum_g2;
      c.count = col.trace_ids.size();
      // centred baseline; the true one is centred + anchor
      double centred = -anchor;
      if (c.sum_g2 > 0.0) {
        switch (baseline) {
          case Baseline::LogWeight: centred = m.sum_g2_w / m.sum_g2; break;
          case Baseline::LiteralWeight:
            centred = simd::weighted_moments(col.g[i], lit_col).sum_g2_w / m.sum_g2 - anchor;
            break;
          case Baseline::None: break;
        }
      } else if (baseline != Baseline::None) {
        centred = 0.0;
      }
      c.baseline = centred + anchor;
      c.gradient = simd::residual_dot(col.g[i], w_col, centred);
    }
    out.entries.emplace(addr, std::move(comps));
  }
  return out;
}

}  // namespace bbpl
