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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "graphpir/families.hpp"
#include "graphpir/graph_pir.hpp"
#include "graphpir/partition.hpp"
#include "graphpir/privacy_audit.hpp"
#include "graphpir/rate_analysis.hpp"
#include "graphpir/star_pir.hpp"
#include "oracles.hpp"

namespace gpir {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0 for none
  std::function<Outcome()> run;
};

StorageGraph seven_servers() { return parse_edge_list("7\n1 2\n1 3\n2 3\n2 4\n3 4\n4 5\n5 6\n4 7\n5 7\n"); }

std::vector<std::vector<std::uint32_t>> raw_sets(const IndependentPartition& p) {
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& s : p.sets()) {
    out.emplace_back();
    for (auto v : s) out.back().push_back(v.value);
  }
  return out;
}

struct NamedGraph {
  std::string name;
  StorageGraph graph;
};

std::vector<NamedGraph> audit_fixtures() {
  std::vector<NamedGraph> out = {
      {"path-5", generate_family({Family::path, 5, 0, 1})},
      {"cycle-5", generate_family({Family::cycle, 5, 0, 1})},
      {"star-5", generate_family({Family::star, 5, 0, 1})},
      {"K2,3", generate_family({Family::bipartite, 2, 3, 1})},
      {"seven", seven_servers()},
      {"K3^(2)", generate_family({Family::complete_multigraph, 3, 0, 2})},
  };
  for (std::uint32_t n = 3; n <= 6; ++n) out.push_back({"K" + std::to_string(n), generate_family({Family::complete, n, 0, 1})});
  return out;
}

// The shift mutant changes a server's view only when one of its coins drives
// two downstream slots of the same server.
bool shift_detectable(const StorageGraph& g, const IndependentPartition& p) {
  for (auto v : p.order()) {
    std::map<std::uint32_t, int> per_group;
    for (auto e : p.downstream(v))
      if (++per_group[g.edge(e).multiplicity] == 2) return true;
  }
  return false;
}

Outcome star_example() {
  const auto p = make_star_params(9, 2);
  const auto d = star_expected_download(p);
  auto mc = monte_carlo_star(p, 100000, 20260101, 1, ParallelMap::hardware());
  std::string note;
  if (!mc.within(d)) {
    // A 3 SE band misses about 0.3% of honest runs; one fresh seed is allowed.
    note = " (rerun)";
    mc = monte_carlo_star(p, 100000, 20260102, 1, ParallelMap::hardware());
  }
  std::ostringstream s;
  s << "D=" << to_string(d) << " mc=" << mc.mean << "+-" << mc.std_error << note;
  return {d == Rational(13, 3) && mc.within(d) && mc.decode_failures == 0, s.str()};
}

Outcome star_two_fifths() {
  const auto r = 1 / star_expected_download(make_star_params(4, 1));
  return {r == Rational(2, 5), "R=" + to_string(r)};
}

Outcome guarantee_sweep() {
  std::uint32_t worst = 0;
  for (std::uint32_t k = 1; k <= 2000; ++k) {
    auto s = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(k + 1)));
    while (s * s < k + 1) ++s;
    while (s > 1 && (s - 1) * (s - 1) >= k + 1) --s;
    const Rational bound = Rational(2 * s) - 2 + Rational(1, s + 1);
    if (star_expected_download(optimize_params(k)) > bound) return {false, "violated at K=" + std::to_string(k)};
    if (star_expected_download(optimize_params(k)) == bound) ++worst;
  }
  return {true, "K=1..2000, tight at " + std::to_string(worst) + " values"};
}

Outcome reference_partition() {
  const auto g = seven_servers();
  const auto p = IndependentPartition::from_sets(
      g, {{VertexId{2}, VertexId{6}, VertexId{7}}, {VertexId{1}, VertexId{4}}, {VertexId{3}, VertexId{5}}});
  const std::vector<Rational> want = {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(3, 4),
                                      Rational(7, 8), Rational(7, 8), Rational(7, 8)};
  std::vector<Rational> got;
  for (auto v : p.order()) got.push_back(1 - null_query_probability(g, p, v));
  const auto d = expected_download(g, p);
  return {got == want && d == Rational(39, 8), "D=" + to_string(d)};
}

Outcome complete_graphs() {
  for (std::uint32_t n = 3; n <= 8; ++n) {
    const auto g = generate_family({Family::complete, n, 0, 1});
    const auto p = greedy_independent_partition(g);
    if (p.set_count() != n) return {false, "K" + std::to_string(n) + " partition not singleton"};
    if (expected_download(g, p) != Rational(n - 1)) return {false, "K" + std::to_string(n)};
  }
  return {true, "N=3..8"};
}

Outcome balanced_bipartite() {
  std::ostringstream s;
  bool ok = true;
  for (std::uint32_t n : {4u, 6u, 8u}) {
    const auto g = generate_family({Family::bipartite, n / 2, n / 2, 1});
    const auto p = greedy_independent_partition(g);
    const auto d = expected_download(g, p);
    const auto alpha = independence_number(g);
    ok = ok && 1 / d >= Rational(4) / (3 * n) && d <= Rational(n) - Rational(alpha, 2);
    s << "N=" << n << " D=" << to_string(d) << " ";
  }
  return {ok, s.str()};
}

Outcome multigraphs() {
  std::ostringstream s;
  bool ok = true;
  for (std::uint32_t n : {3u, 4u})
    for (std::uint32_t r = 1; r <= 3; ++r) {
      const auto g = generate_family({Family::complete_multigraph, n, 0, r});
      const auto p = greedy_independent_partition(g);
      const auto d = expected_download(g, p);
      for (std::size_t theta = 0; theta < g.edge_count(); theta += std::max<std::size_t>(1, g.edge_count() / 3))
        ok = ok && oracle::download_from_null_counts(oracle::enumerate_null_queries(g, raw_sets(p), theta)) == d;
      const auto quoted = complete_multigraph_closed_form(n, r);
      if (r == 1) ok = ok && d == Rational(n - 1) && quoted == d;
      s << "K" << n << "^(" << r << ") D=" << to_string(d) << " quoted=" << to_string(quoted) << " ";
    }
  return {ok, s.str()};
}

Outcome exact_privacy() {
  std::size_t configs = 0, star_caught = 0, shift_caught = 0, shared_caught = 0;
  for (std::uint32_t padded = 1; padded <= 6; ++padded)
    for (auto u : feasible_side_info(padded))
      for (std::uint32_t files = 1; files <= padded; ++files) {
        const StarParams p{files, padded, u};
        ++configs;
        if (!audit_star_exact(p).pass) return {false, "star leak"};
        const bool caught = !audit_star_exact(p, StarMutation::theta_excluded_from_side_info).pass;
        if (caught != (u >= 1 && files >= 2)) return {false, "star mutant outcome unexpected"};
        star_caught += caught;
      }
  const auto fixtures = audit_fixtures();
  for (const auto& f : fixtures) {
    const auto p = greedy_independent_partition(f.graph);
    if (!audit_graph_exact(f.graph, p).pass) return {false, f.name + " leaks"};
    const bool shift = !audit_graph_exact(f.graph, p, GraphMutation::shift_at_upstream_endpoint).pass;
    const bool shared = !audit_graph_exact(f.graph, p, GraphMutation::coin_shared_across_groups).pass;
    if (shift != shift_detectable(f.graph, p)) return {false, f.name + " shift mutant outcome unexpected"};
    if (shared != (f.graph.multiplicity() > 1)) return {false, f.name + " shared-coin mutant outcome unexpected"};
    shift_caught += shift;
    shared_caught += shared;
  }
  std::ostringstream s;
  s << configs << " star configs, " << fixtures.size() << " graphs; mutants caught: star " << star_caught
    << ", shift " << shift_caught << "/" << fixtures.size() << ", shared-coin " << shared_caught
    << " (every remaining case leaves the server view provably unchanged)";
  return {star_caught > 0 && shift_caught > 0 && shared_caught > 0, s.str()};
}

Outcome transcripts() {
  std::size_t runs = 0;
  for (std::size_t bits : {1u, 64u}) {
    Rng rng(derive_seed(20260101, bits));
    for (const auto& f : audit_fixtures()) {
      const auto p = greedy_independent_partition(f.graph);
      const auto store = FileStore::random(f.graph.edge_count(), bits, rng);
      for (int t = 0; t < 1000; ++t) {
        const EdgeId theta{static_cast<std::uint32_t>(rng.below(f.graph.edge_count()))};
        if (run_graph_transcript(f.graph, p, theta, store, rng).decoded != store.at(theta.value))
          return {false, f.name + " decode failure"};
        ++runs;
      }
    }
    for (std::uint32_t k : {1u, 2u, 4u, 5u, 9u, 15u}) {
      for (const auto& params : {optimize_params(k), square_padding_params(k)}) {
        const auto store = make_star_store(params, bits, rng);
        for (int t = 0; t < 1000; ++t) {
          const auto theta = static_cast<std::uint32_t>(1 + rng.below(k));
          if (run_star_transcript(theta, params, store, rng).decoded != store.at(theta - 1))
            return {false, "star K=" + std::to_string(k) + " decode failure"};
          ++runs;
        }
      }
    }
  }
  return {true, std::to_string(runs) + " transcripts decoded"};
}

Outcome star_closed_forms() {
  std::size_t checked = 0;
  for (std::uint32_t padded = 1; padded <= 6; ++padded)
    for (auto u : feasible_side_info(padded))
      for (std::uint32_t files = 1; files <= padded; ++files) {
        const StarParams p{files, padded, u};
        const Rational each = Rational(padded - u, padded) / Rational(oracle::factorial(padded));
        for (std::uint32_t theta = 1; theta <= files; ++theta) {
          const auto d = star_exact_distribution(p, theta);
          for (std::uint32_t i = 1; i <= padded; ++i)
            if (d[i - 1].probability(star_spoke_key(i, SpokeQuery{i})) != Rational(u, padded) ||
                d[i - 1].probability(star_spoke_key(i, std::nullopt)) != Rational(padded - u, padded))
              return {false, "spoke mismatch"};
          const auto& hub = d[padded];
          const auto null_key = star_hub_key(padded + 1, std::nullopt);
          if (hub.probability(null_key) != Rational(u, padded)) return {false, "hub null mismatch"};
          std::size_t matrices = 0;
          for (const auto& [key, count] : hub.counts()) {
            if (key == null_key) continue;
            ++matrices;
            if (hub.probability(key) != each) return {false, "hub matrix mismatch"};
          }
          if (BigInt(matrices) != oracle::factorial(padded)) return {false, "hub support mismatch"};
          ++checked;
        }
      }
  return {true, std::to_string(checked) + " (config, theta) pairs"};
}

Outcome capacity_sanity() {
  std::size_t rows = 0, checks = 0;
  std::vector<SweepConfig> sweeps = {{Family::complete, 3, 12, 1, 0, 1}, {Family::star, 3, 40, 1, 0, 1},
                                     {Family::bipartite, 3, 12, 1, 0, 1}, {Family::cycle, 3, 14, 1, 0, 1},
                                     {Family::path, 3, 14, 1, 0, 1}};
  for (std::uint32_t r = 1; r <= 4; ++r) sweeps.push_back({Family::complete_multigraph, 3, 6, r, 0, 1});
  for (const auto& cfg : sweeps)
    for (const auto& row : compare_report(cfg)) {
      ++rows;
      for (const auto& c : row.checks) {
        if (!c.id.starts_with("rate<=")) continue;
        ++checks;
        if (!c.pass)
          return {false, family_name(cfg.family) + " N=" + std::to_string(row.servers) + " fails " + c.id};
      }
    }
  return {true, std::to_string(rows) + " rows, " + std::to_string(checks) +
                    " upper-bound checks (tabulated r^-r multigraph form and the generic 2/N form on stars excluded)"};
}

}  // namespace
}  // namespace gpir

int main() {
  using namespace gpir;
  const std::vector<Criterion> criteria = {
      {1, "star K=9 u=2 exact and Monte-Carlo", 5, star_example},
      {2, "star K=4 u=1 rate 2/5", 0, star_two_fifths},
      {3, "star guarantee sweep", 10, guarantee_sweep},
      {4, "seven-server partition download", 0, reference_partition},
      {5, "complete graphs D = N-1", 0, complete_graphs},
      {6, "balanced bipartite rate", 0, balanced_bipartite},
      {7, "complete multigraphs vs enumeration", 0, multigraphs},
      {8, "exact privacy audit and mutants", 60, exact_privacy},
      {9, "end-to-end decoding", 0, transcripts},
      {10, "star query distributions", 0, star_closed_forms},
      {11, "rates within known upper bounds", 0, capacity_sanity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
      o.pass = false;
      o.detail += " (over time limit)";
    }
    failed += !o.pass;
    std::printf("criterion %2d %s  %-38s %7.3fs  %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name.c_str(), secs,
                o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
