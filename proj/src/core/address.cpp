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

#include "bbpl/core/address.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace bbpl {
namespace {

bool is_token(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s.front())) && s.front() != '_') return false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ':' || c == '#') return false;
  }
  return true;
}

}  // namespace

Address::Address(std::string tag, std::vector<Arg> args) : tag_(std::move(tag)), args_(std::move(args)) {
  if (!is_token(tag_)) throw std::invalid_argument("address tag must be a non-numeric token: '" + tag_ + "'");
  for (const auto& a : args_) {
    if (const auto* s = std::get_if<std::string>(&a); s && !is_token(*s)) {
      throw std::invalid_argument("address string arg must be a non-numeric token: '" + *s + "'");
    }
  }
}

std::string Address::to_string() const {
  std::string out = tag_;
  for (const auto& a : args_) {
    out += ':';
    if (const auto* i = std::get_if<std::int64_t>(&a)) {
      out += std::to_string(*i);
    } else {
      out += std::get<std::string>(a);
    }
  }
  return out;
}

Address Address::parse(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    auto next = text.find(':', pos);
    parts.push_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  std::vector<Arg> args;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    auto p = parts[i];
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v);
    if (ec == std::errc() && ptr == p.data() + p.size() && !p.empty()) {
      args.emplace_back(v);
    } else {
      args.emplace_back(std::string(p));
    }
  }
  return Address(std::string(parts.front()), std::move(args));
}

std::strong_ordering operator<=>(const Address& a, const Address& b) {
  if (auto c = a.tag_ <=> b.tag_; c != 0) return c;
  const auto n = std::min(a.args_.size(), b.args_.size());
  for (std::size_t i = 0; i < n; ++i) {
    // variant ordering: index first (int before string), then value
    if (auto c = a.args_[i] <=> b.args_[i]; c != 0) return c;
  }
  return a.args_.size() <=> b.args_.size();
}

std::size_t AddressHash::operator()(const Address& a) const noexcept {
  std::size_t h = std::hash<std::string>{}(a.tag());
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (const auto& arg : a.args()) {
    if (const auto* i = std::get_if<std::int64_t>(&arg)) {
      mix(std::hash<std::int64_t>{}(*i));
    } else {
      mix(std::hash<std::string>{}(std::get<std::string>(arg)) * 31 + 1);
    }
  }
  return h;
}

}  // namespace bbpl
