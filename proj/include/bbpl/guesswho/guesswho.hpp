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
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbpl/core/trace.hpp"
#include "bbpl/core/train.hpp"

namespace bbpl::guesswho {

// "Does the hidden individual have value `value` for `attribute`?"
struct Question {
  std::size_t attribute = 0;
  std::string value;
};

/// Individuals x attributes table plus the derived question list.
///
/// Two-valued attributes get one question each: the value "true" for boolean
/// attributes, otherwise the value that appears first in the table. Attributes
/// with more values get one question per value, in order of first appearance.
class Ontology {
 public:
  static Ontology parse(std::istream& is);
  // The bundled 24-individual table, validated.
  static const Ontology& standard();

  std::size_t num_individuals() const { return names_.size(); }
  std::size_t num_attributes() const { return attributes_.size(); }
  std::size_t num_questions() const { return questions_.size(); }

  const std::string& name(std::size_t s) const { return names_.at(s); }
  const std::vector<std::string>& attributes() const { return attributes_; }
  const std::string& value(std::size_t s, std::size_t attribute) const { return values_.at(s).at(attribute); }
  const Question& question(std::size_t q) const { return questions_.at(q); }
  std::string question_label(std::size_t q) const;
  bool predicate(std::size_t q, std::size_t s) const { return truth_[q * names_.size() + s]; }

  std::optional<std::size_t> find_individual(const std::string& name) const;
  std::optional<std::size_t> find_question(const std::string& attribute, const std::string& value) const;

  // Same questions restricted to some individuals.
  Ontology subset(std::span<const std::size_t> individuals) const;

 private:
  void build_truth();

  std::vector<std::string> attributes_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> values_;
  std::vector<Question> questions_;
  std::vector<bool> truth_;  // question-major
};

// Throws ValidationError unless there are 24 individuals and 19 questions.
void validate_standard_counts(const Ontology& ontology);
Ontology load_ontology(const std::string& path);

class DegenerateBelief : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

using Belief = std::vector<double>;

Belief uniform_belief(std::size_t n);

/// Per-question response likelihoods for a fixed accuracy:
/// yes(q)[s] = p(answer yes | s), no(q)[s] = p(answer no | s).
class ResponseModel {
 public:
  ResponseModel(const Ontology& ontology, double accuracy);

  double accuracy() const { return accuracy_; }
  std::size_t num_questions() const { return nq_; }
  std::size_t num_individuals() const { return ns_; }
  std::span<const double> yes(std::size_t q) const { return {yes_.data() + q * ns_, ns_}; }
  std::span<const double> no(std::size_t q) const { return {no_.data() + q * ns_, ns_}; }
  std::span<const double> likelihood(std::size_t q, bool response) const { return response ? yes(q) : no(q); }

 private:
  double accuracy_;
  std::size_t nq_;
  std::size_t ns_;
  std::vector<double> yes_;
  std::vector<double> no_;
};

/// Truthful predicate value, flipped unless the fixed Bernoulli(accuracy)
/// draw at `addr` succeeds.
bool answer(const Ontology& ontology, std::size_t hidden, std::size_t q, double accuracy, TraceContext& ctx,
            const Address& addr);

/// b'(s) proportional to b(s) * likelihood(response | s), renormalized.
/// Throws DegenerateBelief when every candidate is ruled out.
Belief belief_update(const Belief& b, std::size_t q, bool response, const ResponseModel& model);
void belief_update_in_place(Belief& b, std::size_t q, bool response, const ResponseModel& model);

/// Myopic value of information: E_response[max_s b'(s)] - max_s b(s).
double voi(const Belief& b, std::size_t q, const ResponseModel& model);

// Values within this distance of the best count as tied.
inline constexpr double kTieTolerance = 1e-12;

// Question with the largest VOI; ties go to the smallest index.
std::size_t voi_choose(const Belief& b, const ResponseModel& model);

struct QuestionHistory {
  std::vector<int> counts;
  explicit QuestionHistory(std::size_t questions = 0) : counts(questions, 0) {}
  int total() const;
};

struct LearnedSettings {
  double a_log_scale = 0.0;  // log sigma of the A-entry priors
  bool learn_a_scale = false;
  double gamma_log_scale = 0.0;
  bool learn_gamma_scale = false;
};

/// Per-episode draw of the learned policy's parameters: A_qs = exp(z_qs) with
/// z_qs ~ Normal at ("A" q s), and gamma = logistic(g), g ~ Normal at ("gamma").
/// Priors start at mean 0.
struct LearnedDraw {
  std::vector<double> a;  // question-major, num_questions x num_individuals
  double gamma = 0.5;
  bool drawn = false;
};

void draw_learned(TraceContext& ctx, std::size_t questions, std::size_t individuals, const LearnedSettings& settings,
                  LearnedDraw& out);

// v_q = gamma^{n_q} (A b)_q
std::vector<double> learned_weights(const LearnedDraw& draw, const Belief& b, const QuestionHistory& hist);

/// Samples a question with probability v_q / sum v; the choice is a fixed
/// Categorical record at ("ask" round).
std::size_t learned_choose(TraceContext& ctx, const Belief& b, const QuestionHistory& hist, LearnedDraw& draw,
                           const LearnedSettings& settings, std::size_t round);

std::size_t random_choose(TraceContext& ctx, std::size_t questions, std::size_t round);

enum class Policy { Random, Voi, Learned };

Policy parse_policy(const std::string& name);
std::string policy_name(Policy p);

struct EpisodeSettings {
  std::size_t questions = 6;  // T
  double accuracy = 0.9;
  LearnedSettings learned;
};

/// T rounds of choose -> answer -> update from a uniform belief, then a
/// uniform guess among the most probable candidates. Reward 1 if correct.
double episode(Policy policy, const Ontology& ontology, const ResponseModel& model, std::size_t hidden,
               const EpisodeSettings& settings, TraceContext& ctx);

/// Hidden individual drawn uniformly (untraced world noise) each episode.
EpisodeProgram make_program(const Ontology& ontology, Policy policy, const EpisodeSettings& settings);

}  // namespace bbpl::guesswho
