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
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "graphpir/common.hpp"

namespace gpir {

/// One stored file: an unordered server pair plus its parallel-edge index.
/// Normalised so that lo < hi; multiplicity is 1-based.
struct Edge {
  VertexId lo;
  VertexId hi;
  std::uint32_t multiplicity = 1;

  VertexId other(VertexId v) const {
    if (v == lo) return hi;
    if (v == hi) return lo;
    throw std::invalid_argument("vertex is not an endpoint of the edge");
  }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::string to_string(const Edge& e) {
  auto s = "(" + std::to_string(e.lo.value) + "," + std::to_string(e.hi.value);
  if (e.multiplicity != 1) s += "," + std::to_string(e.multiplicity);
  return s + ")";
}

/// Servers are vertices 1..N, files are edges. Edges are kept sorted by
/// (lo, hi, multiplicity) and an EdgeId is the position in that order.
/// Every adjacent pair carries exactly r parallel edges numbered 1..r.
class StorageGraph {
 public:
  StorageGraph() = default;

  /// Validates and canonicalises. Throws std::invalid_argument on self-loops,
  /// out-of-range endpoints, duplicate (pair, multiplicity) or non-uniform
  /// multiplicity.
  static StorageGraph build(std::uint32_t n_servers, std::vector<Edge> edges) {
    if (n_servers == 0) throw std::invalid_argument("graph needs at least one server");
    for (auto& e : edges) {
      if (e.lo.value == 0 || e.lo.value > n_servers || e.hi.value == 0 || e.hi.value > n_servers)
        throw std::invalid_argument("vertex id out of range in edge " + to_string(e));
      if (e.lo == e.hi) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.lo.value));
      if (e.multiplicity == 0) throw std::invalid_argument("multiplicity index must be >= 1");
      if (e.hi < e.lo) std::swap(e.lo, e.hi);
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end())
      throw std::invalid_argument("duplicate edge " + to_string(*dup));

    StorageGraph g;
    g.n_ = n_servers;
    g.r_ = edges.empty() ? 1 : 0;
    for (std::size_t i = 0; i < edges.size();) {
      std::size_t j = i;
      while (j < edges.size() && edges[j].lo == edges[i].lo && edges[j].hi == edges[i].hi) ++j;
      const auto count = static_cast<std::uint32_t>(j - i);
      for (std::size_t t = i; t < j; ++t)
        if (edges[t].multiplicity != t - i + 1)
          throw std::invalid_argument("pair " + to_string(edges[i]) +
                                      " must carry parallel edges numbered 1.." + std::to_string(count));
      if (g.r_ == 0) g.r_ = count;
      if (count != g.r_)
        throw std::invalid_argument("pair " + to_string(edges[i]) + " has " + std::to_string(count) +
                                    " parallel edges, expected " + std::to_string(g.r_));
      i = j;
    }
    g.edges_ = std::move(edges);
    g.incidence_.assign(n_servers + 1, {});
    for (std::uint32_t id = 0; id < g.edges_.size(); ++id) {
      g.incidence_[g.edges_[id].lo.value].push_back(EdgeId{id});
      g.incidence_[g.edges_[id].hi.value].push_back(EdgeId{id});
    }
    for (std::uint32_t v = 1; v <= n_servers; ++v) {
      auto& inc = g.incidence_[v];
      std::sort(inc.begin(), inc.end(), [&](EdgeId x, EdgeId y) {
        const auto& ex = g.edges_[x.value];
        const auto& ey = g.edges_[y.value];
        return std::pair(ex.other(VertexId{v}), ex.multiplicity) <
               std::pair(ey.other(VertexId{v}), ey.multiplicity);
      });
    }
    return g;
  }

  std::uint32_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  /// Parallel edges per adjacent pair; 1 for simple graphs.
  std::uint32_t multiplicity() const noexcept { return r_; }

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId id) const { return edges_.at(id.value); }

  /// Incident edges in ascending (neighbor, multiplicity) order.
  std::span<const EdgeId> incident(VertexId v) const { return incidence_.at(check(v).value); }
  std::size_t degree(VertexId v) const { return incident(v).size(); }

  std::optional<EdgeId> find_edge(VertexId a, VertexId b, std::uint32_t multiplicity = 1) const {
    if (b < a) std::swap(a, b);
    const Edge key{a, b, multiplicity};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key) return std::nullopt;
    return EdgeId{static_cast<std::uint32_t>(it - edges_.begin())};
  }

  bool adjacent(VertexId a, VertexId b) const { return find_edge(a, b, 1).has_value(); }

  /// Distinct neighbours in ascending order.
  std::vector<VertexId> neighbors(VertexId v) const {
    std::vector<VertexId> out;
    for (auto id : incident(v)) {
      const auto w = edge(id).other(v);
      if (out.empty() || out.back() != w) out.push_back(w);
    }
    return out;
  }

  std::vector<VertexId> isolated_vertices() const {
    std::vector<VertexId> out;
    for (std::uint32_t v = 1; v <= n_; ++v)
      if (incidence_[v].empty()) out.push_back(VertexId{v});
    return out;
  }

  friend bool operator==(const StorageGraph& a, const StorageGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  VertexId check(VertexId v) const {
    if (v.value == 0 || v.value > n_) throw std::out_of_range("vertex " + std::to_string(v.value) + " not in graph");
    return v;
  }

  std::uint32_t n_ = 0;
  std::uint32_t r_ = 1;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> incidence_;
};

/// Replaces every edge of a simple graph by r parallel edges.
inline StorageGraph multigraph_extend(const StorageGraph& g, std::uint32_t r) {
  if (r == 0) throw std::invalid_argument("multigraph extension needs r >= 1");
  if (g.multiplicity() != 1) throw std::invalid_argument("multigraph extension expects a simple graph");
  std::vector<Edge> edges;
  edges.reserve(g.edge_count() * r);
  for (const auto& e : g.edges())
    for (std::uint32_t k = 1; k <= r; ++k) edges.push_back({e.lo, e.hi, k});
  return StorageGraph::build(g.vertex_count(), std::move(edges));
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::uint64_t> parse_ints(std::string_view s, std::size_t line) {
  std::vector<std::uint64_t> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 9)
      throw ParseError(line, "expected a non-negative integer, got '" + tok + "'");
    out.push_back(std::stoull(tok));
  }
  return out;
}

}  // namespace detail

/// Parses the edge-list format: a first line holding N, then one `i j` or
/// `i j k` line per file (1-based ids, k = parallel-edge index). `#` starts a
/// comment.
///
/// Bare `i j` lines are numbered in order of appearance per pair, which is
/// only allowed to repeat a pair when `r` is given. Passing `r` on a simple
/// graph file applies multigraph_extend.
inline StorageGraph parse_edge_list(std::string_view text, std::optional<std::uint32_t> r = std::nullopt) {
  if (r && *r == 0) throw std::invalid_argument("r must be >= 1");
  std::optional<std::uint32_t> n;
  std::vector<Edge> edges;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::size_t> seen;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> next_index;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> first_line;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const auto nums = detail::parse_ints(line, line_no);
    if (!n) {
      if (nums.size() != 1) throw ParseError(line_no, "first line must hold the server count N");
      if (nums[0] == 0) throw ParseError(line_no, "server count must be positive");
      n = static_cast<std::uint32_t>(nums[0]);
      continue;
    }
    if (nums.size() != 2 && nums.size() != 3) throw ParseError(line_no, "expected 'i j' or 'i j k'");
    auto i = static_cast<std::uint32_t>(nums[0]);
    auto j = static_cast<std::uint32_t>(nums[1]);
    if (i == 0 || j == 0 || i > *n || j > *n)
      throw ParseError(line_no, "vertex id out of range 1.." + std::to_string(*n));
    if (i == j) throw ParseError(line_no, "self-loop at vertex " + std::to_string(i));
    if (j < i) std::swap(i, j);

    std::uint32_t k;
    if (nums.size() == 3) {
      k = static_cast<std::uint32_t>(nums[2]);
      if (k == 0) throw ParseError(line_no, "multiplicity index must be >= 1");
      if (r && k > *r) throw ParseError(line_no, "multiplicity index exceeds r=" + std::to_string(*r));
    } else {
      auto& next = next_index[{i, j}];
      k = ++next;
      while (seen.contains({i, j, k})) k = ++next;
      if (k > 1 && (!r || *r == 1)) throw ParseError(line_no, "duplicate simple edge " + std::to_string(i) + " " + std::to_string(j));
      if (r && k > *r) throw ParseError(line_no, "more than r=" + std::to_string(*r) + " parallel edges");
    }
    if (seen.contains({i, j, k})) throw ParseError(line_no, "duplicate edge");
    seen[{i, j, k}] = line_no;
    first_line.try_emplace({i, j}, line_no);
    edges.push_back({VertexId{i}, VertexId{j}, k});
  }
  if (!n) throw ParseError(line_no, "missing server count line");

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> counts;
  for (const auto& e : edges) ++counts[{e.lo.value, e.hi.value}];
  bool simple = std::all_of(counts.begin(), counts.end(), [](const auto& kv) { return kv.second == 1; });
  const bool extend = r && *r > 1 && simple &&
                      std::all_of(edges.begin(), edges.end(), [](const Edge& e) { return e.multiplicity == 1; });
  if (!extend) {
    const std::uint32_t want = r ? *r : (counts.empty() ? 1 : counts.begin()->second);
    for (const auto& [pair, c] : counts)
      if (c != want)
        throw ParseError(first_line[pair], "pair " + std::to_string(pair.first) + " " + std::to_string(pair.second) +
                                               " has " + std::to_string(c) + " parallel edges, expected " +
                                               std::to_string(want));
  }
  for (const auto& e : edges)
    if (e.multiplicity > counts[{e.lo.value, e.hi.value}])
      throw ParseError(seen[{e.lo.value, e.hi.value, e.multiplicity}],
                       "pair " + std::to_string(e.lo.value) + " " + std::to_string(e.hi.value) +
                           " must carry parallel edges numbered 1.." +
                           std::to_string(counts[{e.lo.value, e.hi.value}]));
  StorageGraph g;
  try {
    g = StorageGraph::build(*n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no, e.what());
  }
  return extend ? multigraph_extend(g, *r) : g;
}

/// Canonical edge-list text: sorted edges, multiplicity column only for r > 1.
inline std::string serialize_edge_list(const StorageGraph& g) {
  std::string out = std::to_string(g.vertex_count()) + "\n";
  for (const auto& e : g.edges()) {
    out += std::to_string(e.lo.value) + " " + std::to_string(e.hi.value);
    if (g.multiplicity() > 1) out += " " + std::to_string(e.multiplicity);
    out += "\n";
  }
  return out;
}

}  // namespace gpir
