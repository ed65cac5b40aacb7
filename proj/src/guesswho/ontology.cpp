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
#include <fstream>
#include <istream>
#include <sstream>

#include "bbpl/core/errors.hpp"
#include "bbpl/guesswho/guesswho.hpp"

namespace bbpl::guesswho {
namespace detail {
extern const char* const kStandardOntologyText;
}

Ontology Ontology::parse(std::istream& is) {
  Ontology o;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> cells;
    for (std::string cell; ls >> cell;) cells.push_back(cell);
    if (cells.empty()) continue;
    if (!header) {
      if (cells.front() != "id" || cells.size() < 2) throw ValidationError("ontology: first row must be 'id <attributes...>'");
      o.attributes_.assign(cells.begin() + 1, cells.end());
      header = true;
      continue;
    }
    if (cells.size() != o.attributes_.size() + 1) {
      throw ValidationError("ontology line " + std::to_string(lineno) + ": expected " +
                            std::to_string(o.attributes_.size() + 1) + " columns");
    }
    if (o.find_individual(cells.front())) throw ValidationError("ontology: duplicate id '" + cells.front() + "'");
    o.names_.push_back(cells.front());
    o.values_.emplace_back(cells.begin() + 1, cells.end());
  }
  if (!header || o.names_.empty()) throw ValidationError("ontology: no individuals");

  for (std::size_t a = 0; a < o.attributes_.size(); ++a) {
    std::vector<std::string> seen;
    for (const auto& row : o.values_) {
      if (std::find(seen.begin(), seen.end(), row[a]) == seen.end()) seen.push_back(row[a]);
    }
    if (seen.size() < 2) continue;  // constant attribute carries no information
    if (seen.size() == 2) {
      const bool boolean = std::find(seen.begin(), seen.end(), "true") != seen.end() &&
                           std::find(seen.begin(), seen.end(), "false") != seen.end();
      o.questions_.push_back({a, boolean ? std::string("true") : seen.front()});
    } else {
      for (const auto& v : seen) o.questions_.push_back({a, v});
    }
  }
  o.build_truth();
  return o;
}

void Ontology::build_truth() {
  truth_.assign(questions_.size() * names_.size(), false);
  for (std::size_t q = 0; q < questions_.size(); ++q) {
    for (std::size_t s = 0; s < names_.size(); ++s) {
      truth_[q * names_.size() + s] = values_[s][questions_[q].attribute] == questions_[q].value;
    }
  }
}

const Ontology& Ontology::standard() {
  static const Ontology o = [] {
    std::istringstream is(detail::kStandardOntologyText);
    auto parsed = Ontology::parse(is);
    validate_standard_counts(parsed);
    return parsed;
  }();
  return o;
}

std::string Ontology::question_label(std::size_t q) const {
  const auto& question = questions_.at(q);
  return attributes_[question.attribute] + "=" + question.value;
}

std::optional<std::size_t> Ontology::find_individual(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::optional<std::size_t> Ontology::find_question(const std::string& attribute, const std::string& value) const {
  for (std::size_t q = 0; q < questions_.size(); ++q) {
    if (attributes_[questions_[q].attribute] == attribute && questions_[q].value == value) return q;
  }
  return std::nullopt;
}

Ontology Ontology::subset(std::span<const std::size_t> individuals) const {
  Ontology o;
  o.attributes_ = attributes_;
  o.questions_ = questions_;
  for (auto s : individuals) {
    o.names_.push_back(names_.at(s));
    o.values_.push_back(values_.at(s));
  }
  o.build_truth();
  return o;
}

void validate_standard_counts(const Ontology& o) {
  if (o.num_individuals() != 24) {
    throw ValidationError("ontology: expected 24 individuals, found " + std::to_string(o.num_individuals()));
  }
  if (o.num_questions() != 19) {
    throw ValidationError("ontology: expected 19 questions, found " + std::to_string(o.num_questions()));
  }
}

Ontology load_ontology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("ontology: cannot open " + path);
  auto o = Ontology::parse(in);
  validate_standard_counts(o);
  return o;
}

}  // namespace bbpl::guesswho
