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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bbpl/core/address.hpp"
#include "bbpl/core/distributions.hpp"

namespace bbpl {

/// Learnable hyperparameters keyed by address.
///
/// Values are held unconstrained in one flat vector (rho). The constrained
/// hyperparameters are lambda = exp(rho) for positive components (Dirichlet
/// and Beta) and lambda = rho otherwise. Entries are only ever added.
class HyperStore {
 public:
  struct Entry {
    DistFamily family;
    std::size_t offset = 0;
  };

  using Map = std::map<Address, Entry>;

  // Adds a learnable entry from constrained hypers. Throws std::logic_error if
  // the address exists, std::invalid_argument for fixed families or bad hypers.
  void insert(const Address& addr, const DistFamily& family, std::span<const double> hypers);
  // Same, from unconstrained values (used when reading files back bit-exactly).
  void insert_unconstrained(const Address& addr, const DistFamily& family, std::span<const double> rho);

  const Entry* find(const Address& addr) const;
  bool contains(const Address& addr) const { return find(addr) != nullptr; }

  std::vector<double> hypers(const Address& addr) const;
  void hypers_into(const Entry& entry, std::span<double> out) const;

  std::size_t size() const { return entries_.size(); }
  // Total number of scalar hyperparameters.
  std::size_t dimension() const { return rho_.size(); }

  std::span<double> raw() { return rho_; }
  std::span<const double> raw() const { return rho_; }

  Map::const_iterator begin() const { return entries_.begin(); }
  Map::const_iterator end() const { return entries_.end(); }

  // Same addresses, families and unconstrained values; storage layout is ignored.
  friend bool operator==(const HyperStore& a, const HyperStore& b);

  static double to_constrained(const DistFamily& f, std::size_t i, double rho);
  static double to_unconstrained(const DistFamily& f, std::size_t i, double lambda);

 private:
  Map entries_;
  std::vector<double> rho_;
};

/// Line-oriented text form:
///   # comment lines
///   hyperstore v1
///   <address> <family> <arity> <rho_1> ... <rho_k>
/// rho values are written with 17 significant digits so reading is exact.
void write_hyperstore(std::ostream& os, const HyperStore& store, const std::vector<std::string>& comments = {});
HyperStore read_hyperstore(std::istream& is);

}  // namespace bbpl
