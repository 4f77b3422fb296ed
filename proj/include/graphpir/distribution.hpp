// Copyright 2026 The graphpir Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "graphpir/common.hpp"

namespace gpir {

/// Exact distribution of one server's query for one desired file, kept as
/// integer outcome weights over a known sample space so that no rounding
/// ever happens. Keys are canonical query encodings; the null query owns a
/// reserved key per scheme.
class ExactDistribution {
 public:
  ExactDistribution() = default;
  ExactDistribution(std::uint32_t server, std::string theta) : server_(server), theta_(std::move(theta)) {}

  std::uint32_t server() const noexcept { return server_; }
  const std::string& theta() const noexcept { return theta_; }

  void add(const std::string& key, const BigInt& weight) {
    counts_[key] += weight;
    total_ += weight;
  }

  const std::map<std::string, BigInt>& counts() const noexcept { return counts_; }
  const BigInt& total_weight() const noexcept { return total_; }

  Rational probability(const std::string& key) const {
    auto it = counts_.find(key);
    if (it == counts_.end() || total_ == 0) return Rational(0);
    return Rational(it->second, total_);
  }

  /// Sum of all probabilities. Exactly 1 for any non-empty distribution.
  Rational mass() const {
    BigInt sum = 0;
    for (const auto& [k, c] : counts_) sum += c;
    return total_ == 0 ? Rational(0) : Rational(sum, total_);
  }

 private:
  std::uint32_t server_ = 0;
  std::string theta_;
  std::map<std::string, BigInt> counts_;
  BigInt total_ = 0;
};

/// Half the L1 distance, in exact arithmetic. Supports are merged, so a key
/// missing from one side counts as probability zero there.
inline Rational total_variation(const ExactDistribution& a, const ExactDistribution& b) {
  Rational sum = 0;
  auto ia = a.counts().begin();
  auto ib = b.counts().begin();
  const auto ea = a.counts().end();
  const auto eb = b.counts().end();
  while (ia != ea || ib != eb) {
    Rational pa = 0, pb = 0;
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      pa = Rational(ia->second, a.total_weight());
      ++ia;
    } else if (ia == ea || ib->first < ia->first) {
      pb = Rational(ib->second, b.total_weight());
      ++ib;
    } else {
      pa = Rational(ia->second, a.total_weight());
      pb = Rational(ib->second, b.total_weight());
      ++ia;
      ++ib;
    }
    sum += pa > pb ? pa - pb : pb - pa;
  }
  return sum / 2;
}

}  // namespace gpir
