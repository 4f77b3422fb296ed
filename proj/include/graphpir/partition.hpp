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

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "graphpir/common.hpp"
#include "graphpir/graph.hpp"

namespace gpir {

inline bool is_independent_set(const StorageGraph& g, std::span<const VertexId> set) {
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j)
      if (g.adjacent(set[i], set[j])) return false;
  return true;
}

/// True when no vertex of `universe` outside `set` could be added to `set`
/// without breaking independence.
inline bool is_maximal_within(const StorageGraph& g, std::span<const VertexId> set,
                              std::span<const VertexId> universe) {
  for (auto v : universe) {
    if (std::find(set.begin(), set.end(), v) != set.end()) continue;
    const bool blocked = std::any_of(set.begin(), set.end(), [&](VertexId s) { return g.adjacent(s, v); });
    if (!blocked) return false;
  }
  return true;
}

/// Ordered disjoint independent sets I_1..I_k covering every non-isolated
/// vertex, each maximal in the subgraph induced by itself and the later sets.
///
/// Per vertex, incident edges are split into downstream (other endpoint in a
/// strictly later set) and upstream (strictly earlier set). The query slot
/// order used by the general-graph scheme is downstream edges first, then
/// upstream edges, each by ascending (neighbor, multiplicity).
class IndependentPartition {
 public:
  IndependentPartition() = default;

  /// Validates `sets` against `g`; throws std::invalid_argument on overlap,
  /// missing or isolated vertices, non-independent sets, or a set that is
  /// not maximal within its suffix.
  static IndependentPartition from_sets(const StorageGraph& g, std::vector<std::vector<VertexId>> sets) {
    IndependentPartition p;
    const auto n = g.vertex_count();
    p.set_of_.assign(n + 1, 0);
    for (std::size_t s = 0; s < sets.size(); ++s) {
      auto& set = sets[s];
      if (set.empty()) throw std::invalid_argument("independent set " + std::to_string(s + 1) + " is empty");
      std::sort(set.begin(), set.end());
      for (auto v : set) {
        if (v.value == 0 || v.value > n) throw std::invalid_argument("vertex " + std::to_string(v.value) + " not in graph");
        if (g.degree(v) == 0) throw std::invalid_argument("isolated vertex " + std::to_string(v.value) + " cannot be partitioned");
        if (p.set_of_[v.value] != 0) throw std::invalid_argument("vertex " + std::to_string(v.value) + " appears twice");
        p.set_of_[v.value] = static_cast<std::uint32_t>(s + 1);
      }
      if (!is_independent_set(g, set))
        throw std::invalid_argument("set " + std::to_string(s + 1) + " is not independent");
    }
    for (std::uint32_t v = 1; v <= n; ++v) {
      if (g.degree(VertexId{v}) == 0)
        p.isolated_.push_back(VertexId{v});
      else if (p.set_of_[v] == 0)
        throw std::invalid_argument("vertex " + std::to_string(v) + " is not covered by the partition");
    }
    for (std::size_t s = 0; s < sets.size(); ++s) {
      std::vector<VertexId> suffix;
      for (std::size_t t = s; t < sets.size(); ++t) suffix.insert(suffix.end(), sets[t].begin(), sets[t].end());
      if (!is_maximal_within(g, sets[s], suffix))
        throw std::invalid_argument("set " + std::to_string(s + 1) + " is not maximal in its suffix subgraph");
    }

    p.sets_ = std::move(sets);
    p.slots_.assign(n + 1, {});
    p.down_degree_.assign(n + 1, 0);
    for (std::uint32_t v = 1; v <= n; ++v) {
      if (p.set_of_[v] == 0) continue;
      const VertexId vid{v};
      auto& slots = p.slots_[v];
      const auto inc = g.incident(vid);
      slots.assign(inc.begin(), inc.end());
      const auto mid = std::stable_partition(slots.begin(), slots.end(), [&](EdgeId e) {
        return p.set_of_[g.edge(e).other(vid).value] > p.set_of_[v];
      });
      p.down_degree_[v] = static_cast<std::size_t>(mid - slots.begin());
      if (p.set_of_[v] >= 2 && p.down_degree_[v] == slots.size())
        throw std::invalid_argument("vertex " + std::to_string(v) + " in a later set has no upstream edge");
    }
    return p;
  }

  std::size_t set_count() const noexcept { return sets_.size(); }
  std::span<const std::vector<VertexId>> sets() const noexcept { return sets_; }
  const std::vector<VertexId>& set(std::size_t s) const { return sets_.at(s - 1); }

  /// Vertices stripped because they store no files.
  std::span<const VertexId> isolated() const noexcept { return isolated_; }

  bool contains(VertexId v) const { return v.value < set_of_.size() && set_of_[v.value] != 0; }

  /// 1-based index of the set holding v.
  std::size_t set_index(VertexId v) const { return set_of_.at(require(v).value); }

  /// All partitioned vertices, set by set, ascending within a set.
  std::vector<VertexId> order() const {
    std::vector<VertexId> out;
    for (const auto& s : sets_) out.insert(out.end(), s.begin(), s.end());
    return out;
  }

  std::span<const EdgeId> slots(VertexId v) const { return slots_.at(require(v).value); }
  std::size_t downstream_degree(VertexId v) const { return down_degree_.at(require(v).value); }
  std::span<const EdgeId> downstream(VertexId v) const { return slots(v).first(downstream_degree(v)); }
  std::span<const EdgeId> upstream(VertexId v) const { return slots(v).subspan(downstream_degree(v)); }

  /// Position of edge e within v's slot vector.
  std::optional<std::size_t> slot_of(VertexId v, EdgeId e) const {
    const auto s = slots(v);
    const auto it = std::find(s.begin(), s.end(), e);
    if (it == s.end()) return std::nullopt;
    return static_cast<std::size_t>(it - s.begin());
  }

 private:
  VertexId require(VertexId v) const {
    if (!contains(v)) throw std::invalid_argument("vertex " + std::to_string(v.value) + " is not in the partition");
    return v;
  }

  std::vector<std::vector<VertexId>> sets_;
  std::vector<std::uint32_t> set_of_;
  std::vector<VertexId> isolated_;
  std::vector<std::vector<EdgeId>> slots_;
  std::vector<std::size_t> down_degree_;
};

/// Repeated greedy maximal independent sets over `order` (default ascending
/// ids). Isolated vertices are skipped; the order must list every other
/// vertex exactly once.
inline IndependentPartition greedy_independent_partition(const StorageGraph& g,
                                                         std::optional<std::vector<VertexId>> order = std::nullopt) {
  const auto n = g.vertex_count();
  std::vector<VertexId> remaining;
  if (order) {
    std::vector<bool> listed(n + 1, false);
    for (auto v : *order) {
      if (v.value == 0 || v.value > n) throw std::invalid_argument("ordering names unknown vertex " + std::to_string(v.value));
      if (listed[v.value]) throw std::invalid_argument("ordering repeats vertex " + std::to_string(v.value));
      listed[v.value] = true;
      if (g.degree(v) > 0) remaining.push_back(v);
    }
    for (std::uint32_t v = 1; v <= n; ++v)
      if (!listed[v] && g.degree(VertexId{v}) > 0)
        throw std::invalid_argument("ordering omits vertex " + std::to_string(v));
  } else {
    for (std::uint32_t v = 1; v <= n; ++v)
      if (g.degree(VertexId{v}) > 0) remaining.push_back(VertexId{v});
  }

  std::vector<std::vector<VertexId>> sets;
  while (!remaining.empty()) {
    std::vector<VertexId> chosen;
    std::vector<VertexId> rest;
    for (auto v : remaining) {
      const bool blocked = std::any_of(chosen.begin(), chosen.end(), [&](VertexId c) { return g.adjacent(c, v); });
      (blocked ? rest : chosen).push_back(v);
    }
    sets.push_back(std::move(chosen));
    remaining = std::move(rest);
  }
  return IndependentPartition::from_sets(g, std::move(sets));
}

inline constexpr std::uint32_t kExactIndependenceLimit = 24;

namespace detail {

// Branch on the lowest candidate; vertices with no candidate neighbour are
// taken unconditionally.
inline std::uint32_t max_independent(std::uint32_t candidates, std::span<const std::uint32_t> adj, std::uint32_t& best_set,
                                     std::uint32_t chosen, std::uint32_t best) {
  while (candidates != 0) {
    const int v = std::countr_zero(candidates);
    if ((adj[v] & candidates) != 0) break;
    chosen |= 1U << v;
    candidates &= ~(1U << v);
  }
  const auto size = static_cast<std::uint32_t>(std::popcount(chosen));
  if (candidates == 0) {
    if (size > best) best_set = chosen;
    return std::max(size, best);
  }
  if (size + static_cast<std::uint32_t>(std::popcount(candidates)) <= best) return best;
  const int v = std::countr_zero(candidates);
  const std::uint32_t bit = 1U << v;
  best = max_independent(candidates & ~bit & ~adj[v], adj, best_set, chosen | bit, best);
  best = max_independent(candidates & ~bit, adj, best_set, chosen, best);
  return best;
}

}  // namespace detail

/// A maximum independent set of the subgraph induced by `within` (all
/// vertices when empty). Refuses graphs above kExactIndependenceLimit vertices.
inline std::vector<VertexId> exact_max_independent_set(const StorageGraph& g, std::span<const VertexId> within = {}) {
  if (g.vertex_count() > kExactIndependenceLimit)
    throw GuardExceeded("exact independence number limited to " + std::to_string(kExactIndependenceLimit) +
                        " vertices, graph has " + std::to_string(g.vertex_count()));
  const auto n = g.vertex_count();
  std::vector<std::uint32_t> adj(n, 0);
  for (const auto& e : g.edges()) {
    adj[e.lo.value - 1] |= 1U << (e.hi.value - 1);
    adj[e.hi.value - 1] |= 1U << (e.lo.value - 1);
  }
  std::uint32_t candidates = 0;
  if (within.empty())
    candidates = n == 32 ? ~0U : (1U << n) - 1;
  else
    for (auto v : within) candidates |= 1U << (v.value - 1);
  std::uint32_t best_set = 0;
  detail::max_independent(candidates, adj, best_set, 0, 0);
  std::vector<VertexId> out;
  for (std::uint32_t v = 0; v < n; ++v)
    if (best_set & (1U << v)) out.push_back(VertexId{v + 1});
  return out;
}

inline std::size_t independence_number(const StorageGraph& g) { return exact_max_independent_set(g).size(); }

/// Each set is a maximum independent set of the remaining induced subgraph.
inline IndependentPartition largest_independent_partition(const StorageGraph& g) {
  std::vector<VertexId> remaining;
  for (std::uint32_t v = 1; v <= g.vertex_count(); ++v)
    if (g.degree(VertexId{v}) > 0) remaining.push_back(VertexId{v});
  std::vector<std::vector<VertexId>> sets;
  while (!remaining.empty()) {
    auto set = exact_max_independent_set(g, remaining);
    std::erase_if(remaining, [&](VertexId v) { return std::binary_search(set.begin(), set.end(), v); });
    sets.push_back(std::move(set));
  }
  return IndependentPartition::from_sets(g, std::move(sets));
}

/// (downstream, upstream) incident edges of n in canonical slot order.
inline std::pair<std::vector<EdgeId>, std::vector<EdgeId>> classify_edges(const StorageGraph& g,
                                                                          const IndependentPartition& p, VertexId n) {
  if (!p.contains(n)) throw std::invalid_argument("vertex " + std::to_string(n.value) + " is not in the partition");
  if (p.slots(n).size() != g.degree(n)) throw std::invalid_argument("partition was built for a different graph");
  const auto down = p.downstream(n);
  const auto up = p.upstream(n);
  return {{down.begin(), down.end()}, {up.begin(), up.end()}};
}

}  // namespace gpir
