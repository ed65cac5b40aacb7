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

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bbpl {

/// Structured name of one random choice, e.g. ("Q" 3 7) or ("move" start 2 good).
///
/// Two addresses name the same random variable iff tag and args are equal.
/// Ordering is lexicographic on (tag, args) with integer args ordered before
/// string args, so maps keyed by Address iterate deterministically.
class Address {
 public:
  using Arg = std::variant<std::int64_t, std::string>;

  Address() = default;
  explicit Address(std::string tag, std::vector<Arg> args = {});

  template <class... Ts>
  static Address make(std::string tag, Ts&&... args) {
    std::vector<Arg> out;
    out.reserve(sizeof...(Ts));
    (out.push_back(to_arg(std::forward<Ts>(args))), ...);
    return Address(std::move(tag), std::move(out));
  }

  const std::string& tag() const { return tag_; }
  const std::vector<Arg>& args() const { return args_; }

  // Colon-joined text form, "Q:3:7". Inverse of parse().
  std::string to_string() const;
  static Address parse(std::string_view text);

  friend bool operator==(const Address&, const Address&) = default;
  friend std::strong_ordering operator<=>(const Address& a, const Address& b);

 private:
  template <class T>
  static Arg to_arg(T&& v) {
    if constexpr (std::integral<std::remove_cvref_t<T>>) {
      return Arg(static_cast<std::int64_t>(v));
    } else {
      return Arg(std::string(std::forward<T>(v)));
    }
  }

  std::string tag_;
  std::vector<Arg> args_;
};

struct AddressHash {
  std::size_t operator()(const Address& a) const noexcept;
};

}  // namespace bbpl
