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

#include <stdexcept>
#include <string>

namespace bbpl {

// Malformed input data (non-finite rewards, corrupt files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration or file contents failed validation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An optimizer update produced a non-finite value. The store is left untouched.
class Diverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An episode exceeded its hard action budget.
class EpisodeCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bbpl
