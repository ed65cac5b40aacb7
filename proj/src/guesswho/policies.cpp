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
#include <memory>

#include "bbpl/core/errors.hpp"
#include "bbpl/core/special.hpp"
#include "bbpl/guesswho/guesswho.hpp"
#include "bbpl/simd/kernels.hpp"

namespace bbpl::guesswho {

Belief uniform_belief(std::size_t n) { return Belief(n, 1.0 / static_cast<double>(n)); }

ResponseModel::ResponseModel(const Ontology& o, double accuracy)
    : accuracy_(accuracy), nq_(o.num_questions()), ns_(o.num_individuals()) {
  if (!(accuracy > 0.5) || accuracy > 1.0) throw ValidationError("guesswho: accuracy must be in (0.5, 1]");
  yes_.resize(nq_ * ns_);
  no_.resize(nq_ * ns_);
  for (std::size_t q = 0; q < nq_; ++q) {
    for (std::size_t s = 0; s < ns_; ++s) {
      const bool t = o.predicate(q, s);
      yes_[q * ns_ + s] = t ? accuracy : 1.0 - accuracy;
      no_[q * ns_ + s] = t ? 1.0 - accuracy : accuracy;
    }
  }
}

bool answer(const Ontology& o, std::size_t hidden, std::size_t q, double accuracy, TraceContext& ctx,
            const Address& addr) {
  const bool truth = o.predicate(q, hidden);
  return ctx.sample_bernoulli(addr, accuracy) ? truth : !truth;
}

void belief_update_in_place(Belief& b, std::size_t q, bool response, const ResponseModel& model) {
  const double total = simd::multiply_sum(b, model.likelihood(q, response));
  if (!(total > 0.0)) throw DegenerateBelief("guesswho: response contradicts every remaining candidate");
  simd::scale(b, 1.0 / total);
}

Belief belief_update(const Belief& b, std::size_t q, bool response, const ResponseModel& model) {
  Belief out = b;
  belief_update_in_place(out, q, response, model);
  return out;
}

double voi(const Belief& b, std::size_t q, const ResponseModel& model) {
  // p(r) * max_s b'(s | r) = max_s b(s) l(r | s), so no normalization is needed.
  const double best_yes = simd::max_product(b, model.yes(q));
  const double best_no = simd::max_product(b, model.no(q));
  const double current = *std::max_element(b.begin(), b.end());
  return best_yes + best_no - current;
}

std::size_t voi_choose(const Belief& b, const ResponseModel& model) {
  std::vector<double> values(model.num_questions());
  for (std::size_t q = 0; q < values.size(); ++q) values[q] = voi(b, q, model);
  const double best = *std::max_element(values.begin(), values.end());
  for (std::size_t q = 0; q < values.size(); ++q) {
    if (values[q] >= best - kTieTolerance) return q;
  }
  return 0;
}

int QuestionHistory::total() const {
  int t = 0;
  for (int c : counts) t += c;
  return t;
}

void draw_learned(TraceContext& ctx, std::size_t questions, std::size_t individuals, const LearnedSettings& settings,
                  LearnedDraw& out) {
  const double a_prior[] = {0.0, settings.a_log_scale};
  const auto a_family = DistFamily::normal(!settings.learn_a_scale);
  out.a.resize(questions * individuals);
  for (std::size_t q = 0; q < questions; ++q) {
    for (std::size_t s = 0; s < individuals; ++s) {
      out.a[q * individuals + s] = std::exp(ctx.sample_real(Address::make("A", q, s), a_family, a_prior));
    }
  }
  const double g_prior[] = {0.0, settings.gamma_log_scale};
  out.gamma = logistic(ctx.sample_real(Address("gamma"), DistFamily::normal(!settings.learn_gamma_scale), g_prior));
  out.drawn = true;
}

std::vector<double> learned_weights(const LearnedDraw& draw, const Belief& b, const QuestionHistory& hist) {
  const std::size_t ns = b.size();
  std::vector<double> v(hist.counts.size());
  for (std::size_t q = 0; q < v.size(); ++q) {
    const double ab = simd::dot(std::span<const double>(draw.a.data() + q * ns, ns), b);
    v[q] = std::pow(draw.gamma, hist.counts[q]) * ab;
  }
  return v;
}

std::size_t learned_choose(TraceContext& ctx, const Belief& b, const QuestionHistory& hist, LearnedDraw& draw,
                           const LearnedSettings& settings, std::size_t round) {
  if (!draw.drawn) draw_learned(ctx, hist.counts.size(), b.size(), settings, draw);
  auto v = learned_weights(draw, b, hist);
  // gamma^n can underflow after many repeats; fall back to uniform rather than fail
  double total = 0.0;
  for (double x : v) total += x;
  if (!(total > 0.0) || !std::isfinite(total)) std::fill(v.begin(), v.end(), 1.0);
  return ctx.sample_categorical(Address::make("ask", round), v);
}

std::size_t random_choose(TraceContext& ctx, std::size_t questions, std::size_t round) {
  const std::vector<double> uniform(questions, 1.0);
  return ctx.sample_categorical(Address::make("ask", round), uniform);
}

Policy parse_policy(const std::string& name) {
  if (name == "random") return Policy::Random;
  if (name == "voi") return Policy::Voi;
  if (name == "learned") return Policy::Learned;
  throw ValidationError("guesswho: unknown policy '" + name + "' (random, voi, learned)");
}

std::string policy_name(Policy p) {
  switch (p) {
    case Policy::Random: return "random";
    case Policy::Voi: return "voi";
    case Policy::Learned: return "learned";
  }
  return "unknown";
}

double episode(Policy policy, const Ontology& o, const ResponseModel& model, std::size_t hidden,
               const EpisodeSettings& settings, TraceContext& ctx) {
  Belief b = uniform_belief(o.num_individuals());
  QuestionHistory hist(o.num_questions());
  LearnedDraw draw;
  for (std::size_t t = 0; t < settings.questions; ++t) {
    std::size_t q = 0;
    switch (policy) {
      case Policy::Random: q = random_choose(ctx, o.num_questions(), t); break;
      case Policy::Voi: q = voi_choose(b, model); break;
      case Policy::Learned: q = learned_choose(ctx, b, hist, draw, settings.learned, t); break;
    }
    ctx.tick();
    const bool response = answer(o, hidden, q, model.accuracy(), ctx, Address::make("answer", t));
    belief_update_in_place(b, q, response, model);
    ++hist.counts[q];
  }
  const double best = *std::max_element(b.begin(), b.end());
  std::vector<double> top(b.size());
  for (std::size_t s = 0; s < b.size(); ++s) top[s] = b[s] >= best - kTieTolerance ? 1.0 : 0.0;
  const std::size_t guess = ctx.sample_categorical(Address("guess"), top);
  return guess == hidden ? 1.0 : 0.0;
}

EpisodeProgram make_program(const Ontology& ontology, Policy policy, const EpisodeSettings& settings) {
  auto o = std::make_shared<const Ontology>(ontology);
  auto model = std::make_shared<const ResponseModel>(ontology, settings.accuracy);
  EpisodeProgram p;
  p.horizon = std::max<std::size_t>(settings.questions, 1);
  p.run = [o, model, policy, settings](TraceContext& ctx) {
    const std::size_t hidden = static_cast<std::size_t>(uniform01(ctx.rng()) * static_cast<double>(o->num_individuals()));
    return episode(policy, *o, *model, std::min(hidden, o->num_individuals() - 1), settings, ctx);
  };
  return p;
}

}  // namespace bbpl::guesswho
