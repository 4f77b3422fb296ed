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

// Published rate bounds for graph-replicated PIR, used as reference numbers
// in reports. Every entry carries its formula string as published. Entries
// marked approximate are never used in assertions.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphpir/common.hpp"
#include "graphpir/families.hpp"

namespace gpir {

enum class BoundKind { lower, upper, capacity };

inline std::string bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::lower: return "lower";
    case BoundKind::upper: return "upper";
    case BoundKind::capacity: return "capacity";
  }
  return "?";
}

struct BoundValue {
  std::string id;       // stable short name, used in CSV columns
  std::string source;   // which prior scheme or converse
  std::string formula;  // as published
  BoundKind kind = BoundKind::lower;
  double value = 0;
  std::optional<Rational> exact;
  /// Upper bounds and capacities are checked against our rate when true.
  bool assertable = false;
};

namespace detail {

inline Rational pow2(int e) {
  if (e >= 0) {
    BigInt v = 1;
    v <<= e;
    return Rational(v);
  }
  return inverse_power_of_two(static_cast<unsigned>(-e));
}

inline BigInt factorial(std::uint32_t n) {
  BigInt f = 1;
  for (std::uint32_t i = 2; i <= n; ++i) f *= i;
  return f;
}

inline BoundValue exact_bound(std::string id, std::string source, std::string formula, BoundKind kind, Rational v,
                              bool assertable) {
  return {std::move(id), std::move(source), std::move(formula), kind, to_double(v), v, assertable};
}

inline BoundValue real_bound(std::string id, std::string source, std::string formula, BoundKind kind, double v,
                             bool assertable) {
  return {std::move(id), std::move(source), std::move(formula), kind, v, std::nullopt, assertable};
}

}  // namespace detail

/// Reference bounds for one family instance. For stars `spec.n` is the
/// vertex count N (K = N - 1 files).
inline std::vector<BoundValue> baseline_table(const FamilySpec& spec) {
  using detail::exact_bound;
  using detail::pow2;
  using detail::real_bound;
  std::vector<BoundValue> out;
  const std::uint32_t n = spec.family == Family::bipartite ? spec.n + spec.n2 : spec.n;
  const double nd = n;
  const Rational nq = n;

  // The generic 2/N converse sits below the star converse from N = 7 on and
  // is beaten by star schemes, so on stars it is reported but not checked.
  auto any_graph = [&] {
    out.push_back(exact_bound("any_lower", "any graph, fixed download, L=1", "1/N", BoundKind::lower, 1 / nq, false));
    out.push_back(exact_bound("any_upper", "any graph, converse", "2/N", BoundKind::upper, 2 / nq,
                              spec.family != Family::star));
  };

  switch (spec.family) {
    case Family::star: {
      out.push_back(real_bound("star_fixed_lower", "star, fixed download, L=sqrt(N-1)+1", "~ 1/(2 sqrt(N-1) + 1)",
                               BoundKind::lower, 1 / (2 * std::sqrt(nd - 1) + 1), false));
      out.push_back(real_bound("star_upper", "star, converse", "1/(sqrt(2N) - 1)", BoundKind::upper,
                               1 / (std::sqrt(2 * nd) - 1), true));
      if (n == 5)
        out.push_back(exact_bound("four_star_capacity", "4-star graph, fixed download, L=5", "5/12", BoundKind::capacity,
                                  Rational(5, 12), true));
      any_graph();
      break;
    }
    case Family::complete: {
      const Rational p = pow2(static_cast<int>(n) - 1);
      out.push_back(exact_bound("complete_lower_a", "complete graph, fixed download, L=2^{N-1}",
                                "2^{N-1}/(2^{N-1}-1) * 1/N", BoundKind::lower, p / (p - 1) / nq, false));
      out.push_back(exact_bound("complete_lower_b", "complete graph, fixed download, L=3*2^{N-2}", "6/(5-2^{3-N}) * 1/N",
                                BoundKind::lower, Rational(6) / (5 - pow2(3 - static_cast<int>(n))) / nq, false));
      out.push_back(real_bound("complete_lower_c", "complete graph, fixed download, L=(N!)^{O(1)}", "~ (1-o(1)) 4/(3N)",
                               BoundKind::lower, 4.0 / (3 * nd), false));
      out.push_back(exact_bound("complete_upper_a", "complete graph, converse", "2/(N+1)", BoundKind::upper,
                                Rational(2) / (nq + 1), true));
      Rational s = 0;
      for (std::uint32_t i = 2; i <= n; ++i) s += Rational(BigInt(1), detail::factorial(i));
      out.push_back(exact_bound("complete_upper_b", "complete graph, converse", "1/(sum_{i=2}^N 1/i!) * 1/N",
                                BoundKind::upper, 1 / s / nq, true));
      any_graph();
      break;
    }
    case Family::complete_multigraph: {
      const auto r = spec.r;
      const Rational shrink = inverse_power_of_two(r);
      const Rational groups = 2 - 2 * shrink;  // 2 - 1/2^{r-1}
      out.push_back(exact_bound("multi_lower_a", "complete multigraph, fixed download, L=3*2^{N+r-3}",
                                "6/(5-2^{3-N}) * 1/N * (2 - 1/2^{r-1})^{-1}", BoundKind::lower,
                                Rational(6) / (5 - pow2(3 - static_cast<int>(n))) / nq / groups, false));
      out.push_back(exact_bound("multi_lower_b", "complete multigraph, variable download, L=1", "1/(N - N/2^{r(N-1)})",
                                BoundKind::lower, 1 / (nq - nq * inverse_power_of_two(r * (n - 1))), false));
      // Two forms of this converse are in circulation. The r^{-r} form is
      // contradicted by our exhaustively verified scheme at r >= 3, so only
      // the 2^{-r} form is checked.
      Rational rr = 1;
      for (std::uint32_t i = 0; i < r; ++i) rr *= r;
      out.push_back(exact_bound("multi_upper_table", "complete multigraph, converse (tabulated form)",
                                "1/(N - (N-1) r^{-r})", BoundKind::upper, 1 / (nq - (nq - 1) / rr), false));
      out.push_back(exact_bound("multi_upper", "complete multigraph, converse", "1/(N - (N-1) 2^{-r})", BoundKind::upper,
                                1 / (nq - (nq - 1) * shrink), true));
      break;
    }
    case Family::bipartite: {
      const double n1 = spec.n, n2 = spec.n2;
      const Rational lower_a = Rational(6) / (5 - pow2(3 - static_cast<int>(n))) / nq;
      const double lower_b = 1 / (2 * n2 * std::sqrt(n1) + n2);
      out.push_back(real_bound("bipartite_lower", "complete bipartite, fixed download",
                               "max(6/(5-2^{3-(N1+N2)}) * 1/(N1+N2), 1/(2 N2 sqrt(N1) + N2))", BoundKind::lower,
                               std::max(to_double(lower_a), lower_b), false));
      if (spec.n == spec.n2) {
        Rational s = 0;
        for (std::uint32_t i = 1; i <= n / 2; ++i) s += Rational(BigInt(1), detail::factorial(i) * (BigInt(1) << i));
        out.push_back(exact_bound("bipartite_upper", "complete bipartite N1=N2=N/2, converse",
                                  "1/(N sum_{i=1}^{N/2} 1/(i! 2^i))", BoundKind::upper, 1 / (nq * s), true));
      }
      out.push_back(real_bound("bipartite_upper_approx", "complete bipartite, converse", "~ 1.5415/N", BoundKind::upper,
                               1.5415 / nd, false));
      any_graph();
      break;
    }
    case Family::cycle:
      out.push_back(exact_bound("cycle_capacity", "cycle, variable download, L=1", "2/(N+1)", BoundKind::capacity,
                                Rational(2) / (nq + 1), true));
      any_graph();
      break;
    case Family::path:
      any_graph();
      break;
  }
  return out;
}

}  // namespace gpir
