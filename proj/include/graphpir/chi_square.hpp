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
#include <stdexcept>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

namespace gpir {

struct ChiSquareResult {
  double statistic = 0;
  std::size_t dof = 0;
  double p_value = 1;
  std::size_t bins = 0;
};

using Histogram = std::map<std::string, std::uint64_t>;

/// Two-sample chi-square homogeneity test for histograms with equal totals:
/// sum over bins of (a - b)^2 / (a + b) against chi^2 with bins - 1 degrees
/// of freedom. Categories with a combined count below `min_bin` are pooled
/// into one bin, and that bin is dropped if it is still below `min_bin`.
inline ChiSquareResult two_sample_chi_square(const Histogram& a, const Histogram& b, std::uint64_t min_bin = 10) {
  std::uint64_t total_a = 0, total_b = 0;
  for (const auto& [k, c] : a) total_a += c;
  for (const auto& [k, c] : b) total_b += c;
  if (total_a != total_b) throw std::invalid_argument("chi-square two-sample test needs equal sample sizes");

  Histogram merged_a = a;
  for (const auto& [k, c] : b) merged_a.try_emplace(k, 0);

  ChiSquareResult r;
  std::uint64_t pool_a = 0, pool_b = 0;
  auto add_bin = [&](double x, double y) {
    if (x + y == 0) return;
    r.statistic += (x - y) * (x - y) / (x + y);
    ++r.bins;
  };
  for (const auto& [k, ca] : merged_a) {
    const auto it = b.find(k);
    const std::uint64_t cb = it == b.end() ? 0 : it->second;
    if (ca + cb < min_bin) {
      pool_a += ca;
      pool_b += cb;
    } else {
      add_bin(static_cast<double>(ca), static_cast<double>(cb));
    }
  }
  if (pool_a + pool_b >= min_bin) add_bin(static_cast<double>(pool_a), static_cast<double>(pool_b));

  if (r.bins <= 1) return r;
  r.dof = r.bins - 1;
  boost::math::chi_squared dist(static_cast<double>(r.dof));
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

}  // namespace gpir
