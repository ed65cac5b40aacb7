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

#include "bbpl/core/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bbpl/core/special.hpp"

namespace bbpl {
namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;
// Beta/Dirichlet draws are kept this far inside the open simplex so that
// log x and log(1 - x) stay finite.
constexpr double kSimplexMargin = 1e-300;
constexpr double kUnitMargin = 1e-15;

void require_arity(const DistFamily& f, std::span<const double> hypers) {
  if (hypers.size() != f.arity) {
    throw std::invalid_argument(f.name() + ": expected " + std::to_string(f.arity) + " hyperparameters, got " +
                                std::to_string(hypers.size()));
  }
}

double as_real(const Value& v, const char* who) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw std::domain_error(std::string(who) + ": value must be real");
}

const std::vector<double>& as_simplex(const Value& v) {
  if (const auto* p = std::get_if<std::vector<double>>(&v)) return *p;
  throw std::domain_error("dirichlet: value must be a vector");
}

double normalized_weight_sum(std::span<const double> w) {
  double total = 0.0;
  for (double x : w) total += x;
  return total;
}

}  // namespace

DistFamily DistFamily::dirichlet(std::size_t k) {
  if (k < 2) throw std::invalid_argument("dirichlet arity must be >= 2");
  return {FamilyKind::Dirichlet, k, false};
}

DistFamily DistFamily::categorical(std::size_t k) {
  if (k < 1) throw std::invalid_argument("categorical arity must be >= 1");
  return {FamilyKind::Categorical, k, false};
}

bool DistFamily::learnable() const {
  return kind == FamilyKind::Dirichlet || kind == FamilyKind::Beta || kind == FamilyKind::NormalMeanLogStd;
}

bool DistFamily::trainable(std::size_t i) const {
  if (!learnable() || i >= arity) return false;
  return !(kind == FamilyKind::NormalMeanLogStd && fixed_scale && i == 1);
}

bool DistFamily::positive(std::size_t i) const {
  return (kind == FamilyKind::Dirichlet || kind == FamilyKind::Beta) && i < arity;
}

std::string DistFamily::name() const {
  switch (kind) {
    case FamilyKind::Dirichlet: return "dirichlet";
    case FamilyKind::Beta: return "beta";
    case FamilyKind::NormalMeanLogStd: return fixed_scale ? "normal-fixed-scale" : "normal";
    case FamilyKind::Categorical: return "categorical";
    case FamilyKind::Bernoulli: return "bernoulli";
  }
  return "unknown";
}

DistFamily DistFamily::parse(const std::string& name, std::size_t arity) {
  DistFamily f;
  if (name == "dirichlet") {
    f = dirichlet(arity);
  } else if (name == "beta") {
    f = beta();
  } else if (name == "normal") {
    f = normal(false);
  } else if (name == "normal-fixed-scale") {
    f = normal(true);
  } else if (name == "categorical") {
    f = categorical(arity);
  } else if (name == "bernoulli") {
    f = bernoulli();
  } else {
    throw std::invalid_argument("unknown distribution family '" + name + "'");
  }
  if (f.arity != arity) throw std::invalid_argument(name + ": arity mismatch");
  return f;
}

void validate_hypers(const DistFamily& f, std::span<const double> hypers) {
  require_arity(f, hypers);
  for (double h : hypers) {
    if (!std::isfinite(h)) throw std::invalid_argument(f.name() + ": non-finite hyperparameter");
  }
  switch (f.kind) {
    case FamilyKind::Dirichlet:
    case FamilyKind::Beta:
      for (double h : hypers) {
        if (!(h > 0.0)) throw std::invalid_argument(f.name() + ": concentrations must be positive");
      }
      break;
    case FamilyKind::NormalMeanLogStd:
      break;
    case FamilyKind::Categorical:
      for (double h : hypers) {
        if (h < 0.0) throw std::invalid_argument("categorical: negative weight");
      }
      if (!(normalized_weight_sum(hypers) > 0.0)) throw std::invalid_argument("categorical: weights sum to zero");
      break;
    case FamilyKind::Bernoulli:
      if (hypers[0] < 0.0 || hypers[0] > 1.0) throw std::invalid_argument("bernoulli: p outside [0, 1]");
      break;
  }
}

double log_density(const DistFamily& f, std::span<const double> hypers, const Value& value) {
  if (f.learnable()) return score_logpdf_grad(f, hypers, value).log_density;
  validate_hypers(f, hypers);
  if (f.kind == FamilyKind::Bernoulli) {
    const auto* b = std::get_if<bool>(&value);
    if (!b) throw std::domain_error("bernoulli: value must be bool");
    return std::log(*b ? hypers[0] : 1.0 - hypers[0]);
  }
  const auto* idx = std::get_if<std::int64_t>(&value);
  if (!idx || *idx < 0 || static_cast<std::size_t>(*idx) >= f.arity) {
    throw std::domain_error("categorical: index outside support");
  }
  return std::log(hypers[static_cast<std::size_t>(*idx)] / normalized_weight_sum(hypers));
}

ScoreResult score_logpdf_grad(const DistFamily& f, std::span<const double> hypers, const Value& value) {
  if (!f.learnable()) throw std::invalid_argument(f.name() + ": fixed family has no score gradient");
  validate_hypers(f, hypers);
  ScoreResult out;
  out.grad.resize(f.arity);
  switch (f.kind) {
    case FamilyKind::Dirichlet: {
      const auto& x = as_simplex(value);
      if (x.size() != f.arity) throw std::domain_error("dirichlet: dimension mismatch");
      double total = 0.0;
      double alpha_sum = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(x[j] > 0.0) || !(x[j] < 1.0)) throw std::domain_error("dirichlet: value outside simplex interior");
        total += x[j];
        alpha_sum += hypers[j];
      }
      if (std::abs(total - 1.0) > 1e-9) throw std::domain_error("dirichlet: value does not sum to one");
      const double psi_sum = digamma(alpha_sum);
      double lp = std::lgamma(alpha_sum);
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double lx = std::log(x[j]);
        lp += (hypers[j] - 1.0) * lx - std::lgamma(hypers[j]);
        out.grad[j] = psi_sum - digamma(hypers[j]) + lx;
      }
      out.log_density = lp;
      break;
    }
    case FamilyKind::Beta: {
      const double x = as_real(value, "beta");
      if (!(x > 0.0) || !(x < 1.0)) throw std::domain_error("beta: value outside (0, 1)");
      const double a = hypers[0];
      const double b = hypers[1];
      const double lx = std::log(x);
      const double l1x = std::log1p(-x);
      out.log_density = (a - 1.0) * lx + (b - 1.0) * l1x - log_beta(a, b);
      const double psi_ab = digamma(a + b);
      out.grad[0] = psi_ab - digamma(a) + lx;
      out.grad[1] = psi_ab - digamma(b) + l1x;
      break;
    }
    case FamilyKind::NormalMeanLogStd: {
      const double x = as_real(value, "normal");
      if (!std::isfinite(x)) throw std::domain_error("normal: value must be finite");
      const double mu = hypers[0];
      const double log_sigma = hypers[1];
      const double sigma = std::exp(log_sigma);
      const double z = (x - mu) / sigma;
      out.log_density = -0.5 * z * z - log_sigma - kLogSqrt2Pi;
      out.grad[0] = z / sigma;
      out.grad[1] = z * z - 1.0;
      break;
    }
    default:
      break;
  }
  return out;
}

double sample_gamma(double shape, Rng& rng) {
  if (shape >= 1.0) {
    std::gamma_distribution<double> g(shape, 1.0);
    return g(rng);
  }
  // Gamma(a) = Gamma(a + 1) * U^(1/a)
  std::gamma_distribution<double> g(shape + 1.0, 1.0);
  const double u = uniform01(rng);
  return g(rng) * std::pow(u, 1.0 / shape);
}

Value sample(const DistFamily& f, std::span<const double> hypers, Rng& rng) {
  validate_hypers(f, hypers);
  switch (f.kind) {
    case FamilyKind::Dirichlet: {
      std::vector<double> x(f.arity);
      double total = 0.0;
      for (std::size_t j = 0; j < f.arity; ++j) {
        x[j] = std::max(sample_gamma(hypers[j], rng), kSimplexMargin);
        total += x[j];
      }
      for (double& v : x) v /= total;
      for (double& v : x) v = std::clamp(v, kSimplexMargin, 1.0 - kUnitMargin);
      return x;
    }
    case FamilyKind::Beta: {
      const double ga = sample_gamma(hypers[0], rng);
      const double gb = sample_gamma(hypers[1], rng);
      double x = ga / (ga + gb);
      if (!(x == x)) x = 0.5;  // both draws underflowed
      return std::clamp(x, kUnitMargin, 1.0 - kUnitMargin);
    }
    case FamilyKind::NormalMeanLogStd: {
      std::normal_distribution<double> n(0.0, 1.0);
      return hypers[0] + std::exp(hypers[1]) * n(rng);
    }
    case FamilyKind::Categorical: {
      const double total = normalized_weight_sum(hypers);
      const double u = uniform01(rng) * total;
      double acc = 0.0;
      std::int64_t last_positive = 0;
      for (std::size_t i = 0; i < hypers.size(); ++i) {
        if (hypers[i] <= 0.0) continue;
        last_positive = static_cast<std::int64_t>(i);
        acc += hypers[i];
        if (u < acc) return static_cast<std::int64_t>(i);
      }
      return last_positive;
    }
    case FamilyKind::Bernoulli:
      return uniform01(rng) < hypers[0];
  }
  throw std::logic_error("unreachable");
}

}  // namespace bbpl
