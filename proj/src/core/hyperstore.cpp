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

#include "bbpl/core/hyperstore.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bbpl/core/errors.hpp"

namespace bbpl {

double HyperStore::to_constrained(const DistFamily& f, std::size_t i, double rho) {
  return f.positive(i) ? std::exp(rho) : rho;
}

double HyperStore::to_unconstrained(const DistFamily& f, std::size_t i, double lambda) {
  return f.positive(i) ? std::log(lambda) : lambda;
}

void HyperStore::insert(const Address& addr, const DistFamily& family, std::span<const double> hypers) {
  if (!family.learnable()) throw std::invalid_argument("hyperstore: " + family.name() + " is not learnable");
  validate_hypers(family, hypers);
  if (entries_.contains(addr)) throw std::logic_error("hyperstore: duplicate address " + addr.to_string());
  const std::size_t offset = rho_.size();
  for (std::size_t i = 0; i < hypers.size(); ++i) rho_.push_back(to_unconstrained(family, i, hypers[i]));
  entries_.emplace(addr, Entry{family, offset});
}

void HyperStore::insert_unconstrained(const Address& addr, const DistFamily& family, std::span<const double> rho) {
  std::vector<double> hypers(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) hypers[i] = to_constrained(family, i, rho[i]);
  insert(addr, family, hypers);
  std::copy(rho.begin(), rho.end(), rho_.begin() + static_cast<std::ptrdiff_t>(entries_.at(addr).offset));
}

const HyperStore::Entry* HyperStore::find(const Address& addr) const {
  auto it = entries_.find(addr);
  return it == entries_.end() ? nullptr : &it->second;
}

void HyperStore::hypers_into(const Entry& e, std::span<double> out) const {
  for (std::size_t i = 0; i < e.family.arity; ++i) out[i] = to_constrained(e.family, i, rho_[e.offset + i]);
}

std::vector<double> HyperStore::hypers(const Address& addr) const {
  const Entry* e = find(addr);
  if (!e) throw std::out_of_range("hyperstore: no entry for " + addr.to_string());
  std::vector<double> out(e->family.arity);
  hypers_into(*e, out);
  return out;
}

bool operator==(const HyperStore& a, const HyperStore& b) {
  if (a.size() != b.size()) return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first || ia->second.family != ib->second.family) return false;
    for (std::size_t i = 0; i < ia->second.family.arity; ++i) {
      if (a.raw()[ia->second.offset + i] != b.raw()[ib->second.offset + i]) return false;
    }
  }
  return true;
}

void write_hyperstore(std::ostream& os, const HyperStore& store, const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << '\n';
  os << "hyperstore v1\n";
  char buf[64];
  for (const auto& [addr, entry] : store) {
    os << addr.to_string() << ' ' << entry.family.name() << ' ' << entry.family.arity;
    for (std::size_t i = 0; i < entry.family.arity; ++i) {
      auto res = std::to_chars(buf, buf + sizeof buf, store.raw()[entry.offset + i], std::chars_format::general, 17);
      os << ' ' << std::string_view(buf, res.ptr);
    }
    os << '\n';
  }
}

HyperStore read_hyperstore(std::istream& is) {
  HyperStore store;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "hyperstore v1") throw DataError("hyperstore: missing 'hyperstore v1' header");
      header = true;
      continue;
    }
    std::istringstream ls(line);
    std::string addr_text, family_name;
    std::size_t arity = 0;
    if (!(ls >> addr_text >> family_name >> arity)) {
      throw DataError("hyperstore line " + std::to_string(lineno) + ": malformed entry");
    }
    try {
      const DistFamily family = DistFamily::parse(family_name, arity);
      std::vector<double> rho_values(arity);
      for (std::size_t i = 0; i < arity; ++i) {
        std::string tok;
        double rho = 0;
        if (!(ls >> tok)) throw DataError("missing value");
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), rho);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(rho)) {
          throw DataError("bad value '" + tok + "'");
        }
        rho_values[i] = rho;
      }
      std::string extra;
      if (ls >> extra) throw DataError("trailing data");
      store.insert_unconstrained(Address::parse(addr_text), family, rho_values);
    } catch (const std::exception& err) {
      throw DataError("hyperstore line " + std::to_string(lineno) + ": " + err.what());
    }
  }
  if (!header) throw DataError("hyperstore: empty file");
  return store;
}

}  // namespace bbpl
