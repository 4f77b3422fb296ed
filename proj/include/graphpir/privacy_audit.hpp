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

// Per-server privacy checks.
//
// A server's answer is a deterministic function of its query and of files
// that are independent of all queries, so a query distribution that does not
// depend on the desired file already implies the answer pair does not either.
// Only queries are audited.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "graphpir/chi_square.hpp"
#include "graphpir/common.hpp"
#include "graphpir/distribution.hpp"
#include "graphpir/graph.hpp"
#include "graphpir/graph_pir.hpp"
#include "graphpir/parallel.hpp"
#include "graphpir/partition.hpp"
#include "graphpir/rng.hpp"
#include "graphpir/star_pir.hpp"

namespace gpir {

struct ServerAudit {
  std::uint32_t server = 0;
  Rational max_tv = 0;                 // exact mode
  std::optional<double> p_value;       // statistical mode
  std::optional<double> statistic;
  std::size_t dof = 0;
};

struct AuditReport {
  bool exact = true;
  std::vector<ServerAudit> servers;
  bool pass = true;
  double significance = 0;  // statistical mode
  std::size_t trials = 0;
  std::size_t thetas = 0;
};

inline std::vector<ExactDistribution> enumerate_star(const StarParams& p, std::uint32_t theta,
                                                     StarMutation mutation = StarMutation::none,
                                                     std::uint32_t limit = kStarEnumerationLimit) {
  return star_exact_distribution(p, theta, mutation, limit);
}

inline constexpr std::size_t kGraphEnumerationCoinLimit = 20;

inline std::string graph_theta_label(const StorageGraph& g, EdgeId theta) { return to_string(g.edge(theta)); }

/// Exact per-server query distributions over every equally likely coin
/// outcome, for the partitioned servers in ascending id order.
inline std::vector<ExactDistribution> enumerate_graph(const StorageGraph& g, const IndependentPartition& p, EdgeId theta,
                                                      GraphMutation mutation = GraphMutation::none,
                                                      std::size_t limit = kGraphEnumerationCoinLimit) {
  const CoinLayout layout(g, p, mutation);
  limit = std::min<std::size_t>(limit, 40);
  if (layout.size() > limit)
    throw GuardExceeded("graph enumeration limited to " + std::to_string(limit) + " coins, scheme uses " +
                        std::to_string(layout.size()));
  auto servers = p.order();
  std::sort(servers.begin(), servers.end());
  std::vector<std::unordered_map<std::string, std::uint64_t>> counts(servers.size());
  const std::uint64_t outcomes = std::uint64_t{1} << layout.size();
  for (std::uint64_t o = 0; o < outcomes; ++o) {
    const auto q = build_graph_queries(g, p, layout, CoinAssignment::from_outcome(layout, o), theta, mutation);
    for (std::size_t i = 0; i < servers.size(); ++i) ++counts[i][q[servers[i].value - 1].encode()];
  }
  const auto label = graph_theta_label(g, theta);
  std::vector<ExactDistribution> out;
  for (std::size_t i = 0; i < servers.size(); ++i) {
    ExactDistribution d(servers[i].value, label);
    std::map<std::string, std::uint64_t> sorted(counts[i].begin(), counts[i].end());
    for (const auto& [k, c] : sorted) d.add("graph/" + std::to_string(servers[i].value) + "/" + k, BigInt(c));
    out.push_back(std::move(d));
  }
  return out;
}

/// `per_theta[t][s]` is server s's distribution for the t-th desired file.
/// Passes iff every pairwise total variation distance is exactly zero.
inline AuditReport assert_theta_independence(std::span<const std::vector<ExactDistribution>> per_theta) {
  AuditReport r;
  r.exact = true;
  r.thetas = per_theta.size();
  if (per_theta.empty()) return r;
  const auto servers = per_theta.front().size();
  for (const auto& d : per_theta)
    if (d.size() != servers) throw std::invalid_argument("distribution lists cover different server sets");
  for (std::size_t s = 0; s < servers; ++s) {
    ServerAudit a;
    a.server = per_theta.front()[s].server();
    for (std::size_t t = 0; t < per_theta.size(); ++t) {
      if (per_theta[t][s].server() != a.server) throw std::invalid_argument("server order differs between thetas");
      for (std::size_t u = t + 1; u < per_theta.size(); ++u) a.max_tv = std::max(a.max_tv, total_variation(per_theta[t][s], per_theta[u][s]));
    }
    if (a.max_tv != 0) r.pass = false;
    r.servers.push_back(std::move(a));
  }
  return r;
}

/// Exact audit of every real desired file for a star configuration.
inline AuditReport audit_star_exact(const StarParams& p, StarMutation mutation = StarMutation::none,
                                    std::uint32_t limit = kStarEnumerationLimit) {
  std::vector<std::vector<ExactDistribution>> all;
  for (std::uint32_t theta = 1; theta <= p.files; ++theta) all.push_back(enumerate_star(p, theta, mutation, limit));
  return assert_theta_independence(all);
}

/// Exact audit over every edge as the desired file.
inline AuditReport audit_graph_exact(const StorageGraph& g, const IndependentPartition& p,
                                     GraphMutation mutation = GraphMutation::none,
                                     std::size_t limit = kGraphEnumerationCoinLimit) {
  std::vector<std::vector<ExactDistribution>> all;
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) all.push_back(enumerate_graph(g, p, EdgeId{e}, mutation, limit));
  return assert_theta_independence(all);
}

struct BitMarginal {
  std::uint32_t server = 0;
  std::size_t slot = 0;
  Rational p_one;
};

struct UniformityReport {
  std::vector<BitMarginal> marginals;
  std::vector<std::uint32_t> non_factorizing;  // servers whose (down, up) joint is not a product

  bool marginals_uniform() const {
    return std::all_of(marginals.begin(), marginals.end(), [](const BitMarginal& m) { return m.p_one == Rational(1, 2); });
  }
  bool pass() const { return marginals_uniform() && non_factorizing.empty(); }
};

/// Checks that every query bit is an exactly fair bit and that each server's
/// downstream subvector is independent of its upstream subvector.
inline UniformityReport per_bit_uniformity(const StorageGraph& g, const IndependentPartition& p, EdgeId theta,
                                           GraphMutation mutation = GraphMutation::none) {
  const CoinLayout layout(g, p, mutation);
  if (layout.size() > kGraphEnumerationCoinLimit) throw GuardExceeded("too many coins for exhaustive uniformity check");
  auto servers = p.order();
  std::sort(servers.begin(), servers.end());
  const std::uint64_t outcomes = std::uint64_t{1} << layout.size();

  struct Tally {
    std::vector<std::uint64_t> ones;
    std::map<std::pair<std::string, std::string>, std::uint64_t> joint;
    std::map<std::string, std::uint64_t> down, up;
  };
  std::vector<Tally> tally(servers.size());
  for (std::size_t i = 0; i < servers.size(); ++i) tally[i].ones.assign(p.slots(servers[i]).size(), 0);

  for (std::uint64_t o = 0; o < outcomes; ++o) {
    const auto q = build_graph_queries(g, p, layout, CoinAssignment::from_outcome(layout, o), theta, mutation);
    for (std::size_t i = 0; i < servers.size(); ++i) {
      const auto& bits = q[servers[i].value - 1].bits;
      const auto split = p.downstream_degree(servers[i]);
      std::string d, u;
      for (std::size_t j = 0; j < bits.size(); ++j) {
        tally[i].ones[j] += bits[j];
        (j < split ? d : u).push_back(bits[j] ? '1' : '0');
      }
      ++tally[i].joint[{d, u}];
      ++tally[i].down[d];
      ++tally[i].up[u];
    }
  }

  UniformityReport r;
  for (std::size_t i = 0; i < servers.size(); ++i) {
    for (std::size_t j = 0; j < tally[i].ones.size(); ++j)
      r.marginals.push_back({servers[i].value, j, Rational(BigInt(tally[i].ones[j]), BigInt(outcomes))});
    bool product = true;
    for (const auto& [d, cd] : tally[i].down)
      for (const auto& [u, cu] : tally[i].up) {
        auto it = tally[i].joint.find({d, u});
        const BigInt joint = it == tally[i].joint.end() ? 0 : it->second;
        if (joint * outcomes != BigInt(cd) * cu) product = false;
      }
    if (!product) r.non_factorizing.push_back(servers[i].value);
  }
  return r;
}

inline constexpr std::size_t kMinStatisticalTrials = 10000;

/// Sampler: (desired-file index 0 or 1, rng) -> one canonical key per server.
template <typename Sampler>
AuditReport statistical_audit(std::span<const std::uint32_t> server_ids, Sampler&& sample, std::size_t trials,
                              double significance, std::optional<std::uint64_t> seed,
                              const ParallelMap& pmap = ParallelMap()) {
  if (!seed) throw std::invalid_argument("statistical audit requires an explicit seed");
  if (trials < kMinStatisticalTrials)
    throw std::invalid_argument("statistical audit needs at least " + std::to_string(kMinStatisticalTrials) + " trials");
  if (!(significance > 0 && significance < 1)) throw std::invalid_argument("significance must lie in (0, 1)");

  using Hists = std::vector<std::array<Histogram, 2>>;
  const auto chunks = chunk_ranges(trials, 4096);
  auto partial = pmap(chunks.size(), [&](std::size_t c) {
    Hists h(server_ids.size());
    for (std::size_t t = chunks[c].begin; t < chunks[c].end; ++t)
      for (int side = 0; side < 2; ++side) {
        Rng rng(derive_seed(*seed, 2 * t + side));
        const auto keys = sample(side, rng);
        for (std::size_t s = 0; s < server_ids.size(); ++s) ++h[s][side][keys[s]];
      }
    return h;
  });
  Hists total(server_ids.size());
  for (const auto& h : partial)
    for (std::size_t s = 0; s < h.size(); ++s)
      for (int side = 0; side < 2; ++side)
        for (const auto& [k, c] : h[s][side]) total[s][side][k] += c;

  AuditReport r;
  r.exact = false;
  r.trials = trials;
  r.thetas = 2;
  r.significance = significance;
  // Bonferroni over servers keeps the whole-report false alarm rate at the
  // configured level.
  const double per_server = significance / static_cast<double>(std::max<std::size_t>(1, server_ids.size()));
  for (std::size_t s = 0; s < server_ids.size(); ++s) {
    const auto chi = two_sample_chi_square(total[s][0], total[s][1]);
    ServerAudit a;
    a.server = server_ids[s];
    a.p_value = chi.p_value;
    a.statistic = chi.statistic;
    a.dof = chi.dof;
    if (chi.p_value < per_server) r.pass = false;
    r.servers.push_back(a);
  }
  return r;
}

inline AuditReport statistical_audit_graph(const StorageGraph& g, const IndependentPartition& p, EdgeId theta_a,
                                           EdgeId theta_b, std::size_t trials, double significance,
                                           std::optional<std::uint64_t> seed, GraphMutation mutation = GraphMutation::none,
                                           const ParallelMap& pmap = ParallelMap()) {
  if (theta_a.value >= g.edge_count() || theta_b.value >= g.edge_count())
    throw std::out_of_range("desired file is not an edge of the graph");
  auto servers = p.order();
  std::sort(servers.begin(), servers.end());
  std::vector<std::uint32_t> ids;
  for (auto v : servers) ids.push_back(v.value);
  const CoinLayout layout(g, p, mutation);
  auto sample = [&](int side, Rng& rng) {
    const auto q = build_graph_queries(g, p, layout, CoinAssignment::draw(layout, rng), side ? theta_b : theta_a, mutation);
    std::vector<std::string> keys;
    for (auto v : servers) keys.push_back(q[v.value - 1].encode());
    return keys;
  };
  return statistical_audit(ids, sample, trials, significance, seed, pmap);
}

inline AuditReport statistical_audit_star(const StarParams& params, std::uint32_t theta_a, std::uint32_t theta_b,
                                          std::size_t trials, double significance, std::optional<std::uint64_t> seed,
                                          StarMutation mutation = StarMutation::none,
                                          const ParallelMap& pmap = ParallelMap()) {
  std::vector<std::uint32_t> ids;
  for (std::uint32_t i = 1; i <= params.hub_server(); ++i) ids.push_back(i);
  auto sample = [&](int side, Rng& rng) {
    const auto b = star_generate_queries(side ? theta_b : theta_a, params, rng, mutation);
    std::vector<std::string> keys;
    for (std::uint32_t i = 1; i <= params.padded_files; ++i) keys.push_back(star_spoke_key(i, b.spokes[i - 1]));
    keys.push_back(star_hub_key(params.hub_server(), b.hub));
    return keys;
  };
  return statistical_audit(ids, sample, trials, significance, seed, pmap);
}

}  // namespace gpir
