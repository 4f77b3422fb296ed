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

// Star-graph scheme with unit subpacketization.
//
// Spoke i and the hub share file i. The client fetches u side-information
// files from a uniformly random u-subset U of spokes; if the desired file is
// not among them it sends the hub a (u+1) x a matrix holding every file index
// once, with the desired index hidden in the column that also holds U. The
// hub answers one XOR per column, and the client strips U from the desired
// column's XOR.
//
// File counts that do not suit the chosen u are padded with all-zero dummy
// files, each on its own dummy spoke. Dummy spokes are real participants in
// the protocol and their answers are counted as download.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphpir/common.hpp"
#include "graphpir/distribution.hpp"
#include "graphpir/payload.hpp"
#include "graphpir/rng.hpp"

namespace gpir {

struct StarParams {
  std::uint32_t files = 0;         // real files K (= spokes of the real star)
  std::uint32_t padded_files = 0;  // K'' >= K, includes all-zero dummies
  std::uint32_t side_info = 0;     // u

  std::uint32_t columns() const { return padded_files / (side_info + 1); }
  std::uint32_t rows() const { return side_info + 1; }
  std::uint32_t hub_server() const { return padded_files + 1; }

  friend bool operator==(const StarParams&, const StarParams&) = default;
};

inline void validate(const StarParams& p) {
  if (p.files == 0) throw std::invalid_argument("star needs at least one file");
  if (p.padded_files < p.files) throw std::invalid_argument("padded file count below real file count");
  if (p.padded_files % (p.side_info + 1) != 0)
    throw std::invalid_argument("u+1 must divide the padded file count");
}

/// Smallest padding for which (u+1) divides the file count.
inline StarParams make_star_params(std::uint32_t files, std::uint32_t side_info) {
  if (files == 0) throw std::invalid_argument("star needs at least one file");
  const std::uint32_t block = side_info + 1;
  StarParams p{files, block * ((files + block - 1) / block), side_info};
  validate(p);
  return p;
}

/// (u^2 + K'') / (u+1), the expected number of downloaded files.
inline Rational star_expected_download(const StarParams& p) {
  validate(p);
  const BigInt u = p.side_info;
  return Rational(u * u + p.padded_files, u + 1);
}

/// Minimises the expected download over every u >= 0 with minimal padding.
/// Ties go to the smaller u.
inline StarParams optimize_params(std::uint32_t files) {
  if (files == 0) throw std::invalid_argument("star needs at least one file");
  StarParams best = make_star_params(files, 0);
  // D = num/den compared by cross-multiplication; fits easily in 64 bits.
  std::uint64_t best_num = files, best_den = 1;
  for (std::uint32_t u = 1; u <= files; ++u) {
    const auto cand = make_star_params(files, u);
    const std::uint64_t num = std::uint64_t{u} * u + cand.padded_files;
    const std::uint64_t den = u + 1;
    if (num * best_den < best_num * den) {
      best = cand;
      best_num = num;
      best_den = den;
    }
  }
  return best;
}

/// Padding to K' = s^2 - 1 with s = ceil(sqrt(K+1)) and u = s, the choice
/// behind the closed-form guarantee.
inline StarParams square_padding_params(std::uint32_t files) {
  if (files == 0) throw std::invalid_argument("star needs at least one file");
  std::uint32_t s = 1;
  while (std::uint64_t{s} * s < std::uint64_t{files} + 1) ++s;
  StarParams p{files, s * s - 1, s};
  validate(p);
  return p;
}

/// 2 sqrt(N') - 2 + 1/(sqrt(N') + 1) with N' the smallest perfect square
/// >= K + 1. Exact, since sqrt(N') is an integer.
inline Rational star_download_guarantee(std::uint32_t files) {
  std::uint32_t s = 1;
  while (std::uint64_t{s} * s < std::uint64_t{files} + 1) ++s;
  return Rational(2 * s) - 2 + Rational(1, s + 1);
}

/// Hub query: every index of 1..K'' exactly once, row-major storage.
class QueryMatrix {
 public:
  QueryMatrix() = default;
  QueryMatrix(std::uint32_t rows, std::uint32_t cols) : rows_(rows), cols_(cols), cells_(std::size_t{rows} * cols, 0) {}

  std::uint32_t rows() const noexcept { return rows_; }
  std::uint32_t cols() const noexcept { return cols_; }

  /// 0-based row and column.
  std::uint32_t at(std::uint32_t row, std::uint32_t col) const { return cells_.at(std::size_t{row} * cols_ + col); }
  void set(std::uint32_t row, std::uint32_t col, std::uint32_t file) { cells_.at(std::size_t{row} * cols_ + col) = file; }

  std::span<const std::uint32_t> cells() const noexcept { return cells_; }

  /// Every index of 1..rows*cols appears exactly once.
  bool is_permutation() const {
    std::vector<bool> seen(cells_.size() + 1, false);
    for (auto f : cells_) {
      if (f == 0 || f > cells_.size() || seen[f]) return false;
      seen[f] = true;
    }
    return true;
  }

  std::optional<std::uint32_t> column_of(std::uint32_t file) const {
    for (std::size_t i = 0; i < cells_.size(); ++i)
      if (cells_[i] == file) return static_cast<std::uint32_t>(i % cols_);
    return std::nullopt;
  }

  std::vector<std::uint32_t> column(std::uint32_t col) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t r = 0; r < rows_; ++r) out.push_back(at(r, col));
    return out;
  }

  /// Rows joined by ';', entries by ','.
  std::string encode() const {
    std::string out;
    for (std::uint32_t r = 0; r < rows_; ++r) {
      if (r) out += ';';
      for (std::uint32_t c = 0; c < cols_; ++c) {
        if (c) out += ',';
        out += std::to_string(at(r, c));
      }
    }
    return out;
  }

  friend bool operator==(const QueryMatrix&, const QueryMatrix&) = default;

 private:
  std::uint32_t rows_ = 0;
  std::uint32_t cols_ = 0;
  std::vector<std::uint32_t> cells_;
};

/// A spoke query is either a request for that spoke's file or nothing.
using SpokeQuery = std::optional<std::uint32_t>;

struct StarQueryBundle {
  std::vector<SpokeQuery> spokes;  // index i-1 for spoke i
  std::optional<QueryMatrix> hub;
  std::vector<std::uint32_t> side_info;  // U, ascending
  std::uint32_t theta_column = 0;        // client-private, 0-based; meaningful when hub is set

  std::uint32_t download_units() const {
    return static_cast<std::uint32_t>(side_info.size()) + (hub ? hub->cols() : 0);
  }
};

/// The random draws behind one star transcript.
struct StarChoices {
  std::vector<std::uint32_t> side_info;   // U as a set
  std::uint32_t row = 0;                  // R, 0-based
  std::uint32_t col = 0;                  // C, 0-based
  std::vector<std::uint32_t> side_order;  // sigma_U: U in top-to-bottom order for column C
  std::vector<std::uint32_t> rest_order;  // sigma_V: V in canonical fill order
};

enum class StarMutation {
  none,
  /// U is drawn from the files other than the desired one.
  theta_excluded_from_side_info,
};

/// Assembles the bundle from explicit draws. Column C receives sigma_U top to
/// bottom skipping row R; the other columns receive sigma_V column by column,
/// top to bottom.
inline StarQueryBundle build_star_queries(std::uint32_t theta, const StarParams& p, const StarChoices& ch) {
  validate(p);
  StarQueryBundle b;
  b.side_info = ch.side_info;
  std::sort(b.side_info.begin(), b.side_info.end());
  b.spokes.assign(p.padded_files, std::nullopt);
  for (auto i : b.side_info) b.spokes.at(i - 1) = i;
  if (std::binary_search(b.side_info.begin(), b.side_info.end(), theta)) return b;

  QueryMatrix m(p.rows(), p.columns());
  m.set(ch.row, ch.col, theta);
  std::size_t next = 0;
  for (std::uint32_t r = 0; r < p.rows(); ++r)
    if (r != ch.row) m.set(r, ch.col, ch.side_order.at(next++));
  next = 0;
  for (std::uint32_t c = 0; c < p.columns(); ++c) {
    if (c == ch.col) continue;
    for (std::uint32_t r = 0; r < p.rows(); ++r) m.set(r, c, ch.rest_order.at(next++));
  }
  b.hub = std::move(m);
  b.theta_column = ch.col;
  return b;
}

/// Draw order: U (partial Fisher-Yates over 1..K''), then, only when the
/// desired file is outside U, R, C, sigma_U (shuffle of ascending U) and
/// sigma_V (shuffle of ascending V).
inline StarQueryBundle star_generate_queries(std::uint32_t theta, const StarParams& p, Rng& rng,
                                             StarMutation mutation = StarMutation::none) {
  validate(p);
  if (theta == 0 || theta > p.files)
    throw std::out_of_range("desired file " + std::to_string(theta) + " outside 1.." + std::to_string(p.files));
  StarChoices ch;
  std::vector<std::uint32_t> pool;
  for (std::uint32_t i = 1; i <= p.padded_files; ++i)
    if (mutation != StarMutation::theta_excluded_from_side_info || i != theta) pool.push_back(i);
  ch.side_info = rng.sample(std::move(pool), p.side_info);
  std::sort(ch.side_info.begin(), ch.side_info.end());
  if (!std::binary_search(ch.side_info.begin(), ch.side_info.end(), theta)) {
    ch.row = static_cast<std::uint32_t>(rng.below(p.rows()));
    ch.col = static_cast<std::uint32_t>(rng.below(p.columns()));
    ch.side_order = ch.side_info;
    rng.shuffle(std::span(ch.side_order));
    for (std::uint32_t i = 1; i <= p.padded_files; ++i)
      if (i != theta && !std::binary_search(ch.side_info.begin(), ch.side_info.end(), i)) ch.rest_order.push_back(i);
    rng.shuffle(std::span(ch.rest_order));
  }
  return build_star_queries(theta, p, ch);
}

/// Store for a padded star: random real files, all-zero dummies.
inline FileStore make_star_store(const StarParams& p, std::size_t bits, Rng& rng) {
  FileStore fs(p.padded_files, bits);
  for (std::uint32_t i = 0; i < p.files; ++i) fs.set(i, Payload::random(bits, rng));
  return fs;
}

inline std::optional<Payload> star_spoke_respond(std::uint32_t spoke, const SpokeQuery& q, const FileStore& fs) {
  if (!q) return std::nullopt;
  if (*q != spoke)
    throw ProtocolViolation("spoke " + std::to_string(spoke) + " asked for file " + std::to_string(*q) + " it does not store");
  if (spoke == 0 || spoke > fs.size()) throw ProtocolViolation("unknown spoke " + std::to_string(spoke));
  return fs.at(spoke - 1);
}

/// One XOR per column of the matrix.
inline std::vector<Payload> star_hub_respond(const QueryMatrix& m, const FileStore& fs) {
  if (!m.is_permutation() || m.cells().size() != fs.size())
    throw ProtocolViolation("hub query must list each of the " + std::to_string(fs.size()) + " files exactly once");
  std::vector<Payload> out;
  out.reserve(m.cols());
  for (std::uint32_t c = 0; c < m.cols(); ++c) {
    Payload acc(fs.payload_bits());
    for (std::uint32_t r = 0; r < m.rows(); ++r) acc ^= fs.at(m.at(r, c) - 1);
    out.push_back(std::move(acc));
  }
  return out;
}

/// `spoke_answers` is indexed like bundle.spokes.
inline Payload star_decode(std::uint32_t theta, const StarQueryBundle& bundle,
                           std::span<const std::optional<Payload>> spoke_answers,
                           const std::optional<std::vector<Payload>>& hub_answer) {
  auto spoke_payload = [&](std::uint32_t i) -> const Payload& {
    if (i == 0 || i > spoke_answers.size() || !spoke_answers[i - 1])
      throw DecodeError("missing answer from spoke " + std::to_string(i));
    return *spoke_answers[i - 1];
  };
  if (std::binary_search(bundle.side_info.begin(), bundle.side_info.end(), theta)) return spoke_payload(theta);
  if (!bundle.hub) throw DecodeError("desired file outside U but no hub query was built");
  if (!hub_answer || hub_answer->size() != bundle.hub->cols()) throw DecodeError("missing or short hub answer");
  Payload out = hub_answer->at(bundle.theta_column);
  for (auto k : bundle.side_info) out ^= spoke_payload(k);
  return out;
}

struct StarTranscript {
  StarQueryBundle queries;
  std::vector<std::optional<Payload>> spoke_answers;
  std::optional<std::vector<Payload>> hub_answer;
  Payload decoded;
};

inline StarTranscript run_star_transcript(std::uint32_t theta, const StarParams& p, const FileStore& fs, Rng& rng,
                                          StarMutation mutation = StarMutation::none) {
  StarTranscript t;
  t.queries = star_generate_queries(theta, p, rng, mutation);
  for (std::uint32_t i = 1; i <= p.padded_files; ++i)
    t.spoke_answers.push_back(star_spoke_respond(i, t.queries.spokes[i - 1], fs));
  if (t.queries.hub) t.hub_answer = star_hub_respond(*t.queries.hub, fs);
  t.decoded = star_decode(theta, t.queries, t.spoke_answers, t.hub_answer);
  return t;
}

inline std::string star_spoke_key(std::uint32_t spoke, const SpokeQuery& q) {
  return "star/" + std::to_string(spoke) + "/" + (q ? "fetch" : "null");
}

inline std::string star_hub_key(std::uint32_t hub, const std::optional<QueryMatrix>& m) {
  return "star/" + std::to_string(hub) + "/" + (m ? "M:" + m->encode() : "null");
}

inline constexpr std::uint32_t kStarEnumerationLimit = 8;

// Exact enumeration. Each u-subset U has probability 1/C(K'',u); given
// theta outside U, each (R, C, sigma_U, sigma_V) has probability 1/T with
// T = (u+1) a u! (K''-u-1)!. Every branch with theta in U is weighted by T so
// all leaves share the common denominator C(K'',u) T.

inline std::vector<ExactDistribution> star_exact_distribution(const StarParams& p, std::uint32_t theta,
                                                              StarMutation mutation = StarMutation::none,
                                                              std::uint32_t limit = kStarEnumerationLimit) {
  validate(p);
  limit = std::min<std::uint32_t>(limit, 31);
  if (p.padded_files > limit)
    throw GuardExceeded("star enumeration limited to " + std::to_string(limit) +
                        " padded files, got " + std::to_string(p.padded_files));
  if (theta == 0 || theta > p.files) throw std::out_of_range("desired file outside the real files");

  const std::uint32_t k = p.padded_files;
  const std::uint32_t u = p.side_info;
  auto factorial = [](std::uint32_t n) {
    BigInt f = 1;
    for (std::uint32_t i = 2; i <= n; ++i) f *= i;
    return f;
  };
  const BigInt inner = BigInt(p.rows()) * p.columns() * factorial(u) * factorial(k - u - 1);

  const std::string label = std::to_string(theta);
  std::vector<ExactDistribution> dists;
  for (std::uint32_t i = 1; i <= k + 1; ++i) dists.emplace_back(i, label);

  for (std::uint32_t mask = 0; mask < (1U << k); ++mask) {
    if (static_cast<std::uint32_t>(std::popcount(mask)) != u) continue;
    if (mutation == StarMutation::theta_excluded_from_side_info && (mask & (1U << (theta - 1)))) continue;
    StarChoices ch;
    for (std::uint32_t i = 1; i <= k; ++i)
      if (mask & (1U << (i - 1))) ch.side_info.push_back(i);
    for (std::uint32_t i = 1; i <= k; ++i)
      dists[i - 1].add(star_spoke_key(i, (mask & (1U << (i - 1))) ? SpokeQuery{i} : std::nullopt), inner);

    if (mask & (1U << (theta - 1))) {
      dists[k].add(star_hub_key(k + 1, std::nullopt), inner);
      continue;
    }
    std::vector<std::uint32_t> rest;
    for (std::uint32_t i = 1; i <= k; ++i)
      if (i != theta && !(mask & (1U << (i - 1)))) rest.push_back(i);
    for (ch.row = 0; ch.row < p.rows(); ++ch.row)
      for (ch.col = 0; ch.col < p.columns(); ++ch.col) {
        ch.side_order = ch.side_info;
        do {
          ch.rest_order = rest;
          do {
            const auto b = build_star_queries(theta, p, ch);
            dists[k].add(star_hub_key(k + 1, b.hub), 1);
          } while (std::next_permutation(ch.rest_order.begin(), ch.rest_order.end()));
        } while (std::next_permutation(ch.side_order.begin(), ch.side_order.end()));
      }
  }
  return dists;
}

/// Feasible side-information sizes for a padded count (u+1 divides it).
inline std::vector<std::uint32_t> feasible_side_info(std::uint32_t padded_files) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t u = 0; u < padded_files; ++u)
    if (padded_files % (u + 1) == 0) out.push_back(u);
  return out;
}

}  // namespace gpir
