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

// General-graph scheme with unit subpacketization.
//
// Every server n gets a bit vector over its incident edges (canonical slot
// order of IndependentPartition) and answers with the XOR of the files whose
// bit is set; the all-zero vector means "no query, no answer". Bits are built
// set by set along the partition:
//
//  * downstream edges of n in multiplicity group k all carry n's coin X_{n,k};
//  * an upstream edge (n, m, k) copies the bit m holds for it, flipped when
//    the edge is the desired file. The flip therefore lands at the endpoint
//    in the later set.
//
// Every non-desired file then enters the overall XOR twice and cancels, and
// the desired file enters once.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "graphpir/common.hpp"
#include "graphpir/graph.hpp"
#include "graphpir/partition.hpp"
#include "graphpir/payload.hpp"
#include "graphpir/rng.hpp"

namespace gpir {

enum class GraphMutation {
  none,
  /// The desired-file flip goes to the endpoint in the earlier set.
  shift_at_upstream_endpoint,
  /// One coin per vertex drives all multiplicity groups.
  coin_shared_across_groups,
};

/// Which fair coin drives each (vertex, group). Coins are numbered in draw
/// order: vertices in partition order, groups ascending. Vertices without
/// downstream edges own no coins.
class CoinLayout {
 public:
  struct Coin {
    VertexId vertex;
    std::uint32_t group;  // 0 when shared across groups
  };

  CoinLayout(const StorageGraph& g, const IndependentPartition& p, GraphMutation mutation = GraphMutation::none) {
    index_.assign(g.vertex_count() + 1, {});
    for (auto v : p.order()) {
      std::set<std::uint32_t> groups;
      for (auto e : p.downstream(v)) groups.insert(g.edge(e).multiplicity);
      if (groups.empty()) continue;
      if (mutation == GraphMutation::coin_shared_across_groups) {
        const auto id = coins_.size();
        coins_.push_back({v, 0});
        for (auto k : groups) index_[v.value][k] = id;
      } else {
        for (auto k : groups) {
          index_[v.value][k] = coins_.size();
          coins_.push_back({v, k});
        }
      }
    }
  }

  std::size_t size() const noexcept { return coins_.size(); }
  std::span<const Coin> coins() const noexcept { return coins_; }

  std::size_t coin(VertexId v, std::uint32_t group) const {
    const auto& m = index_.at(v.value);
    auto it = m.find(group);
    if (it == m.end())
      throw std::out_of_range("vertex " + std::to_string(v.value) + " has no coin for group " + std::to_string(group));
    return it->second;
  }

 private:
  std::vector<Coin> coins_;
  std::vector<std::map<std::uint32_t, std::size_t>> index_;
};

/// One bit per coin of a layout.
struct CoinAssignment {
  std::vector<std::uint8_t> bits;

  static CoinAssignment draw(const CoinLayout& layout, Rng& rng) {
    CoinAssignment c;
    c.bits.reserve(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i) c.bits.push_back(rng.bit() ? 1 : 0);
    return c;
  }

  /// Bit i of `outcome` drives coin i; used to enumerate every outcome.
  static CoinAssignment from_outcome(const CoinLayout& layout, std::uint64_t outcome) {
    CoinAssignment c;
    for (std::size_t i = 0; i < layout.size(); ++i) c.bits.push_back((outcome >> i) & 1U);
    return c;
  }

  static CoinAssignment zeros(const CoinLayout& layout) { return {std::vector<std::uint8_t>(layout.size(), 0)}; }
};

struct GraphQueryVector {
  std::vector<std::uint8_t> bits;  // one per canonical slot

  bool is_null() const {
    return std::all_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b == 0; });
  }

  std::string encode() const {
    if (is_null()) return "null";
    std::string s;
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
  }

  friend bool operator==(const GraphQueryVector&, const GraphQueryVector&) = default;
};

/// Queries for every server, indexed by vertex id - 1. Isolated vertices get
/// an empty (null) vector.
using GraphQueries = std::vector<GraphQueryVector>;

inline GraphQueries build_graph_queries(const StorageGraph& g, const IndependentPartition& p, const CoinLayout& layout,
                                        const CoinAssignment& coins, EdgeId theta,
                                        GraphMutation mutation = GraphMutation::none) {
  if (theta.value >= g.edge_count()) throw std::out_of_range("desired file is not an edge of the graph");
  if (coins.bits.size() != layout.size()) throw std::invalid_argument("coin assignment does not match layout");
  const bool flip_upstream_end = mutation == GraphMutation::shift_at_upstream_endpoint;
  GraphQueries q(g.vertex_count());
  for (auto v : p.order()) {
    auto& bits = q[v.value - 1].bits;
    const auto slots = p.slots(v);
    const auto down = p.downstream_degree(v);
    bits.resize(slots.size());
    for (std::size_t j = 0; j < slots.size(); ++j) {
      const auto& e = g.edge(slots[j]);
      const bool is_theta = slots[j] == theta;
      if (j < down) {
        bits[j] = coins.bits[layout.coin(v, e.multiplicity)] ^ (is_theta && flip_upstream_end);
      } else {
        const auto m = e.other(v);
        bits[j] = coins.bits[layout.coin(m, e.multiplicity)] ^ (is_theta && !flip_upstream_end);
      }
    }
  }
  return q;
}

inline GraphQueries generate_queries(const StorageGraph& g, const IndependentPartition& p, EdgeId theta, Rng& rng,
                                     GraphMutation mutation = GraphMutation::none) {
  if (theta.value >= g.edge_count()) throw std::out_of_range("desired file is not an edge of the graph");
  const CoinLayout layout(g, p, mutation);
  return build_graph_queries(g, p, layout, CoinAssignment::draw(layout, rng), theta, mutation);
}

/// The bit server v holds for edge e.
inline std::uint8_t slot_bit(const IndependentPartition& p, const GraphQueries& q, VertexId v, EdgeId e) {
  auto slot = p.slot_of(v, e);
  if (!slot) throw std::invalid_argument("edge is not incident to vertex " + std::to_string(v.value));
  return q.at(v.value - 1).bits.at(*slot);
}

/// XOR of the stored files selected by the query; nothing for a null query.
inline std::optional<Payload> server_respond(const IndependentPartition& p, VertexId n, const GraphQueryVector& q,
                                             const FileStore& fs) {
  const auto slots = p.slots(n);
  if (q.bits.size() != slots.size())
    throw ProtocolViolation("server " + std::to_string(n.value) + " expects " + std::to_string(slots.size()) +
                            " query bits, got " + std::to_string(q.bits.size()));
  if (q.is_null()) return std::nullopt;
  Payload acc(fs.payload_bits());
  for (std::size_t j = 0; j < slots.size(); ++j)
    if (q.bits[j]) acc ^= fs.at(slots[j].value);
  return acc;
}

/// XOR of every non-null answer.
inline Payload decode(std::span<const std::optional<Payload>> answers, std::size_t payload_bits) {
  Payload out(payload_bits);
  for (const auto& a : answers)
    if (a) out ^= *a;
  return out;
}

struct GraphTranscript {
  GraphQueries queries;
  std::vector<std::optional<Payload>> answers;  // by vertex id - 1
  Payload decoded;

  std::size_t download_units() const {
    return static_cast<std::size_t>(std::count_if(answers.begin(), answers.end(), [](const auto& a) { return a.has_value(); }));
  }
};

inline GraphTranscript run_graph_transcript(const StorageGraph& g, const IndependentPartition& p, EdgeId theta,
                                            const FileStore& fs, Rng& rng, GraphMutation mutation = GraphMutation::none) {
  GraphTranscript t;
  t.queries = generate_queries(g, p, theta, rng, mutation);
  t.answers.resize(g.vertex_count());
  for (auto v : p.order()) t.answers[v.value - 1] = server_respond(p, v, t.queries[v.value - 1], fs);
  t.decoded = decode(t.answers, fs.payload_bits());
  return t;
}

/// Number of independent fair coins that must all take fixed values for
/// server n's query to be null: its own downstream coins plus the coin behind
/// every upstream bit.
inline std::size_t constraining_coins(const StorageGraph& g, const IndependentPartition& p, VertexId n) {
  const CoinLayout layout(g, p);
  std::set<std::size_t> coins;
  for (auto e : p.downstream(n)) coins.insert(layout.coin(n, g.edge(e).multiplicity));
  for (auto e : p.upstream(n)) coins.insert(layout.coin(g.edge(e).other(n), g.edge(e).multiplicity));
  return coins.size();
}

/// P(Q_n = 0). In a simple graph this is (1/2)^{d_n - d_n_down + 1} when n
/// has downstream edges and (1/2)^{d_n} otherwise.
inline Rational null_query_probability(const StorageGraph& g, const IndependentPartition& p, VertexId n) {
  return inverse_power_of_two(static_cast<unsigned>(constraining_coins(g, p, n)));
}

/// Sum over servers of P(Q_n != 0), in file-size units.
inline Rational expected_download(const StorageGraph& g, const IndependentPartition& p) {
  Rational d = 0;
  for (auto v : p.order()) d += 1 - null_query_probability(g, p, v);
  return d;
}

/// N - 2^{1-r}: the closed form quoted for the complete multigraph. Matches
/// the probability-derived download only for r = 1.
inline Rational complete_multigraph_closed_form(std::uint32_t n, std::uint32_t r) {
  return Rational(n) - 2 * inverse_power_of_two(r);
}

struct GraphRateBounds {
  Rational expected_download;
  Rational rate;
  std::size_t servers = 0;  // non-isolated
  std::uint32_t multiplicity = 1;
  std::size_t alpha = 0;
  bool alpha_exact = false;
  std::size_t first_set_size = 0;
  Rational alpha_term;      // 1/(N - alpha 2^{-r})
  Rational complete_term;   // 1/(N - 2^{1-r}); only valid at r = 1
  Rational claimed_bound;   // max of the two terms
  /// The lower bound actually checked: both terms at r = 1, the alpha term
  /// alone for r >= 2. Present only when alpha is exact and I_1 attains it.
  std::optional<Rational> asserted_bound;
  bool bound_holds = true;
};

/// Exact rate of the partition plus the closed-form lower bounds. `alpha` is
/// the independence number of the non-isolated part when known exactly; when
/// absent, the exact value is computed for graphs within the exact limit,
/// else |I_1| is used as a labelled lower bound.
inline GraphRateBounds rate_bounds(const StorageGraph& g, const IndependentPartition& p,
                                   std::optional<std::size_t> alpha = std::nullopt) {
  if (g.edge_count() == 0) throw std::invalid_argument("graph stores no files");
  GraphRateBounds b;
  b.expected_download = expected_download(g, p);
  b.rate = 1 / b.expected_download;
  b.servers = p.order().size();
  b.multiplicity = g.multiplicity();
  b.first_set_size = p.set_count() ? p.set(1).size() : 0;
  if (alpha) {
    b.alpha = *alpha;
    b.alpha_exact = true;
  } else if (g.vertex_count() <= kExactIndependenceLimit) {
    const auto active = p.order();
    b.alpha = exact_max_independent_set(g, active).size();
    b.alpha_exact = true;
  } else {
    b.alpha = b.first_set_size;
  }
  const Rational n = b.servers;
  const Rational shrink = inverse_power_of_two(b.multiplicity);
  b.alpha_term = 1 / (n - Rational(b.alpha) * shrink);
  b.complete_term = (n - 2 * shrink) > 0 ? 1 / (n - 2 * shrink) : Rational(0);
  b.claimed_bound = std::max(b.alpha_term, b.complete_term);
  if (b.alpha_exact && b.first_set_size == b.alpha) {
    b.asserted_bound = b.multiplicity == 1 ? b.claimed_bound : b.alpha_term;
    b.bound_holds = b.rate >= *b.asserted_bound;
  }
  return b;
}

}  // namespace gpir
