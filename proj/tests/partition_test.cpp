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

#include "graphpir/partition.hpp"

#include <gtest/gtest.h>

#include <vector>

#include "graphpir/families.hpp"
#include "graphpir/graph.hpp"
#include "graphpir/rng.hpp"
#include "oracles.hpp"

namespace gpir {
namespace {

StorageGraph seven_servers() { return parse_edge_list("7\n1 2\n1 3\n2 3\n2 4\n3 4\n4 5\n5 6\n4 7\n5 7\n"); }

std::vector<std::vector<VertexId>> sets_of(std::initializer_list<std::initializer_list<std::uint32_t>> sets) {
  std::vector<std::vector<VertexId>> out;
  for (const auto& s : sets) {
    std::vector<VertexId> v;
    for (auto x : s) v.push_back(VertexId{x});
    out.push_back(v);
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> raw(const IndependentPartition& p) {
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& s : p.sets()) {
    out.emplace_back();
    for (auto v : s) out.back().push_back(v.value);
  }
  return out;
}

StorageGraph random_graph(Rng& rng, std::uint32_t n, double density, std::uint32_t r = 1) {
  std::vector<Edge> edges;
  for (std::uint32_t a = 1; a <= n; ++a)
    for (std::uint32_t b = a + 1; b <= n; ++b)
      if (static_cast<double>(rng.below(1000)) < density * 1000)
        for (std::uint32_t k = 1; k <= r; ++k) edges.push_back({VertexId{a}, VertexId{b}, k});
  return StorageGraph::build(n, edges);
}

// Checks every structural requirement directly from the graph.
void expect_valid(const StorageGraph& g, const IndependentPartition& p) {
  std::vector<int> seen(g.vertex_count() + 1, 0);
  for (std::size_t s = 0; s < p.set_count(); ++s) {
    ASSERT_FALSE(p.sets()[s].empty());
    for (auto v : p.sets()[s]) {
      ++seen[v.value];
      for (auto w : p.sets()[s]) EXPECT_FALSE(g.adjacent(v, w)) << v.value << "-" << w.value;
    }
    // Maximal in the subgraph of this and all later sets.
    for (std::size_t t = s + 1; t < p.set_count(); ++t)
      for (auto w : p.sets()[t]) {
        bool blocked = false;
        for (auto v : p.sets()[s]) blocked = blocked || g.adjacent(v, w);
        EXPECT_TRUE(blocked) << "vertex " << w.value << " could join set " << s + 1;
      }
  }
  for (std::uint32_t v = 1; v <= g.vertex_count(); ++v) EXPECT_EQ(seen[v], g.degree(VertexId{v}) > 0 ? 1 : 0) << v;
}

TEST(Partition, GreedyOnSevenServerGraph) {
  const auto g = seven_servers();
  const auto p = greedy_independent_partition(g);
  EXPECT_EQ(raw(p), (std::vector<std::vector<std::uint32_t>>{{1, 4, 6}, {2, 5}, {3, 7}}));
  expect_valid(g, p);
}

TEST(Partition, GreedyFollowsOrder) {
  const auto g = seven_servers();
  std::vector<VertexId> order;
  for (std::uint32_t v : {2, 6, 7, 1, 4, 3, 5}) order.push_back(VertexId{v});
  const auto p = greedy_independent_partition(g, order);
  EXPECT_EQ(raw(p), (std::vector<std::vector<std::uint32_t>>{{2, 6, 7}, {1, 4}, {3, 5}}));
}

TEST(Partition, GreedyRejectsBadOrders) {
  const auto g = seven_servers();
  EXPECT_THROW(greedy_independent_partition(g, std::vector<VertexId>{VertexId{1}}), std::invalid_argument);
  EXPECT_THROW(greedy_independent_partition(g, std::vector<VertexId>{VertexId{1}, VertexId{1}}), std::invalid_argument);
  EXPECT_THROW(greedy_independent_partition(g, std::vector<VertexId>{VertexId{9}}), std::invalid_argument);
}

TEST(Partition, ExplicitSetsAccepted) {
  const auto g = seven_servers();
  const auto p = IndependentPartition::from_sets(g, sets_of({{2, 6, 7}, {1, 4}, {3, 5}}));
  EXPECT_EQ(p.set_count(), 3u);
  EXPECT_EQ(p.set_index(VertexId{4}), 2u);
  EXPECT_EQ(p.downstream_degree(VertexId{2}), 3u);
  EXPECT_EQ(p.downstream_degree(VertexId{3}), 0u);
  EXPECT_EQ(p.upstream(VertexId{4}).size(), 2u);
}

struct BadSets {
  const char* why;
  std::vector<std::vector<VertexId>> sets;
};

TEST(Partition, ExplicitSetsRejected) {
  const auto g = seven_servers();
  const std::vector<BadSets> cases = {
      {"not independent", sets_of({{1, 2, 6}, {3, 4}, {5, 7}})},
      {"not maximal", sets_of({{2, 6}, {1, 4}, {3, 5}, {7}})},
      {"missing vertex", sets_of({{2, 6, 7}, {1, 4}, {3}})},
      {"repeated vertex", sets_of({{2, 6, 7}, {1, 4}, {3, 5, 4}})},
      {"empty set", sets_of({{2, 6, 7}, {}, {1, 4}, {3, 5}})},
      {"unknown vertex", sets_of({{2, 6, 7}, {1, 4}, {3, 5, 8}})},
  };
  for (const auto& c : cases) EXPECT_THROW(IndependentPartition::from_sets(g, c.sets), std::invalid_argument) << c.why;

  const auto iso = parse_edge_list("4\n1 2\n2 3\n");
  EXPECT_THROW(IndependentPartition::from_sets(iso, sets_of({{1, 3, 4}, {2}})), std::invalid_argument);
  const auto p = IndependentPartition::from_sets(iso, sets_of({{1, 3}, {2}}));
  ASSERT_EQ(p.isolated().size(), 1u);
  EXPECT_EQ(p.isolated()[0], VertexId{4});
  EXPECT_FALSE(p.contains(VertexId{4}));
}

TEST(Partition, SlotsPutDownstreamFirst) {
  const auto g = multigraph_extend(seven_servers(), 2);
  const auto p = IndependentPartition::from_sets(g, sets_of({{2, 6, 7}, {1, 4}, {3, 5}}));
  // Server 4: downstream to 3 and 5, upstream to 2 and 7, each pair of
  // parallel edges kept together in multiplicity order.
  std::vector<std::string> got;
  for (auto e : p.slots(VertexId{4})) got.push_back(to_string(g.edge(e)));
  EXPECT_EQ(got, (std::vector<std::string>{"(3,4)", "(3,4,2)", "(4,5)", "(4,5,2)", "(2,4)", "(2,4,2)", "(4,7)",
                                           "(4,7,2)"}));
  const auto [down, up] = classify_edges(g, p, VertexId{4});
  EXPECT_EQ(down.size(), 4u);
  EXPECT_EQ(up.size(), 4u);
  EXPECT_EQ(p.slot_of(VertexId{4}, *g.find_edge(VertexId{7}, VertexId{4}, 2)), 7u);
  EXPECT_FALSE(p.slot_of(VertexId{4}, *g.find_edge(VertexId{1}, VertexId{2}, 1)));
}

TEST(PartitionProperty, GreedyValidUnderRandomOrders) {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::uint32_t>(2 + rng.below(11));
    const auto g = random_graph(rng, n, 0.2 + 0.1 * static_cast<double>(rng.below(7)));
    std::vector<VertexId> order;
    for (std::uint32_t v = 1; v <= n; ++v) order.push_back(VertexId{v});
    rng.shuffle(std::span(order));
    const auto p = greedy_independent_partition(g, order);
    expect_valid(g, p);
    if (HasFatalFailure()) return;
  }
}

TEST(PartitionProperty, EveryEdgeDownstreamAtExactlyOneEnd) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::uint32_t>(2 + rng.below(9));
    const auto g = random_graph(rng, n, 0.5, static_cast<std::uint32_t>(1 + rng.below(3)));
    const auto p = greedy_independent_partition(g);
    for (std::uint32_t id = 0; id < g.edge_count(); ++id) {
      const EdgeId e{id};
      const auto& edge = g.edge(e);
      const auto lo_slot = p.slot_of(edge.lo, e);
      const auto hi_slot = p.slot_of(edge.hi, e);
      ASSERT_TRUE(lo_slot && hi_slot);
      const bool lo_down = *lo_slot < p.downstream_degree(edge.lo);
      const bool hi_down = *hi_slot < p.downstream_degree(edge.hi);
      EXPECT_NE(lo_down, hi_down) << to_string(edge);
      EXPECT_EQ(lo_down, p.set_index(edge.lo) < p.set_index(edge.hi));
    }
  }
}

TEST(PartitionProperty, ExactAlphaMatchesBruteForce) {
  Rng rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    const auto n = static_cast<std::uint32_t>(1 + rng.below(13));
    const auto g = random_graph(rng, n, 0.1 * static_cast<double>(1 + rng.below(9)));
    EXPECT_EQ(independence_number(g), oracle::brute_alpha(g));
    if (g.edge_count() == 0) continue;
    const auto p = largest_independent_partition(g);
    expect_valid(g, p);
    std::vector<VertexId> active;
    for (std::uint32_t v = 1; v <= n; ++v)
      if (g.degree(VertexId{v}) > 0) active.push_back(VertexId{v});
    EXPECT_EQ(p.set(1).size(), exact_max_independent_set(g, active).size());
  }
}

TEST(Partition, IndependenceOfFamilies) {
  EXPECT_EQ(independence_number(generate_family({Family::complete, 6, 0, 1})), 1u);
  EXPECT_EQ(independence_number(generate_family({Family::cycle, 7, 0, 1})), 3u);
  EXPECT_EQ(independence_number(generate_family({Family::bipartite, 3, 5, 1})), 5u);
  EXPECT_EQ(independence_number(generate_family({Family::star, 9, 0, 1})), 8u);
  EXPECT_EQ(independence_number(seven_servers()), 3u);
  EXPECT_TRUE(is_independent_set(seven_servers(), std::vector<VertexId>{VertexId{2}, VertexId{6}, VertexId{7}}));
}

TEST(Partition, ExactLimitGuard) {
  const auto g = generate_family({Family::path, kExactIndependenceLimit + 1, 0, 1});
  EXPECT_THROW(independence_number(g), GuardExceeded);
}

}  // namespace
}  // namespace gpir
