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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace gpir {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Tagged integer identifier. Vertex ids are 1-based (server numbering in the
/// edge-list format); edge ids are 0-based positions in the canonical edge list.
template <typename Tag>
struct StrongId {
  std::uint32_t value = 0;

  constexpr StrongId() = default;
  constexpr explicit StrongId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(StrongId, StrongId) = default;
};

struct VertexTag {};
struct EdgeTag {};
using VertexId = StrongId<VertexTag>;
using EdgeId = StrongId<EdgeTag>;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A server was handed a query it cannot legitimately answer.
class ProtocolViolation : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Responses do not contain what the transcript requires for decoding.
class DecodeError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exhaustive computation refused because the instance exceeds a size limit.
class GuardExceeded : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// 2^{-k} as an exact rational.
inline Rational inverse_power_of_two(unsigned k) {
  BigInt den = 1;
  den <<= k;
  return Rational(BigInt(1), den);
}

}  // namespace gpir

template <typename Tag>
struct std::hash<gpir::StrongId<Tag>> {
  std::size_t operator()(gpir::StrongId<Tag> id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
