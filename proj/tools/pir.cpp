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

// pir: command-line driver for the star and general-graph schemes.
//
// Exit codes: 0 success with every asserted check passing, 1 a check or
// audit failed, 2 usage error, 3 input or runtime error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphpir/baselines.hpp"
#include "graphpir/common.hpp"
#include "graphpir/families.hpp"
#include "graphpir/graph.hpp"
#include "graphpir/graph_pir.hpp"
#include "graphpir/parallel.hpp"
#include "graphpir/partition.hpp"
#include "graphpir/payload.hpp"
#include "graphpir/privacy_audit.hpp"
#include "graphpir/rate_analysis.hpp"
#include "graphpir/rng.hpp"
#include "graphpir/star_pir.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace gpir;

constexpr std::uint64_t kDefaultSeed = 20260101;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Options shared by every leaf command.

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string out;
};

struct GraphSource {
  std::string path;
  std::string family;
  std::uint32_t n = 0;
  std::uint32_t n2 = 0;
  std::optional<std::uint32_t> r;
  std::string partition = "greedy";
  std::string order;
  std::string sets;
};

struct StarOptions {
  std::uint32_t k = 0;
  std::optional<std::uint32_t> u;
};

struct Options {
  Common common;
  GraphSource graph;
  StarOptions star;
  std::optional<std::uint32_t> theta_index;
  std::string theta;
  std::string theta_a;
  std::string theta_b;
  std::size_t trials = 100000;
  std::size_t bits = 64;
  double significance = 0.01;
  std::string mutation = "none";
  std::size_t max_coins = kGraphEnumerationCoinLimit;
  std::uint32_t max_padded = kStarEnumerationLimit;
  bool zero_coins = false;
  std::string sweep_family;
  std::uint32_t n_min = 3;
  std::uint32_t n_max = 8;
  std::uint32_t sweep_r = 1;
  std::size_t sweep_trials = 0;
};

struct Seed {
  std::uint64_t value;
  std::string source;
};

Seed resolve_seed(const Common& c) {
  if (c.seed) return {*c.seed, "flag"};
  if (const char* env = std::getenv("PIR_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return {v, "env"};
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("PIR_SEED is not an unsigned integer: ") + env);
  }
  std::cerr << "pir: no seed given, using default seed " << kDefaultSeed << "\n";
  return {kDefaultSeed, "default"};
}

void put_seed(Json& j, const Seed& s) {
  j["seed"] = s.value;
  j["seed_source"] = s.source;
}

ParallelMap workers(const Common& c) { return c.workers ? ParallelMap(*c.workers) : ParallelMap::hardware(); }

void add_common(CLI::App* sub, Options& o, bool seeded) {
  if (seeded) sub->add_option("--seed", o.common.seed, "64-bit seed (fallback: PIR_SEED, then a logged default)");
  sub->add_option("--workers", o.common.workers, "worker threads (default: available parallelism)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", o.common.out, "json, csv, or an output path whose extension picks the format");
}

// ---------------------------------------------------------------------------
// Output.

void emit(const Json& j, const Common& c, const std::optional<std::string>& csv = std::nullopt) {
  std::string format = "json";
  std::string path;
  if (c.out == "csv" || c.out == "json") {
    format = c.out;
  } else if (!c.out.empty()) {
    path = c.out;
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) format = "csv";
  }
  if (format == "csv" && !csv) throw UsageError("this command only writes json");
  const std::string body = format == "csv" ? *csv : j.dump(2) + "\n";
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(path + ": cannot open for writing");
  f << body;
  if (!f) throw std::runtime_error(path + ": write failed");
}

std::string rational(const Rational& q) { return to_string(q); }

Json rational_json(const Rational& q) { return Json{{"value", to_double(q)}, {"exact", rational(q)}}; }

Json bound_json(const BoundValue& b) {
  Json j{{"id", b.id}, {"source", b.source}, {"formula", b.formula}, {"kind", bound_kind_name(b.kind)}, {"value", b.value}};
  if (b.exact) j["exact"] = rational(*b.exact);
  j["assertable"] = b.assertable;
  return j;
}

Json mc_json(const MonteCarloEstimate& e) {
  return Json{{"trials", e.trials},
              {"mean", e.mean},
              {"std_error", e.std_error},
              {"ci95", Json::array({e.mean - 1.96 * e.std_error, e.mean + 1.96 * e.std_error})},
              {"rate", e.rate()},
              {"decode_failures", e.decode_failures}};
}

Json checks_json(const std::vector<RateCheck>& checks, bool& all) {
  Json j = Json::object();
  for (const auto& c : checks) {
    j[c.id] = c.pass;
    all = all && c.pass;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Parsing helpers.

std::vector<std::uint32_t> parse_list(const std::string& text, char sep, const std::string& what) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      const auto v = std::stoul(item, &used);
      if (used != item.size() || v == 0 || v > UINT32_MAX) throw std::invalid_argument(item);
      out.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
      throw UsageError("bad " + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("empty " + what);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(path + ": cannot open");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct LoadedGraph {
  StorageGraph graph;
  Json info;
  std::optional<FamilySpec> family;
};

LoadedGraph load_graph(const GraphSource& src) {
  if (src.path.empty() == src.family.empty()) throw UsageError("give exactly one of --graph or --family");
  LoadedGraph out;
  if (!src.path.empty()) {
    try {
      out.graph = parse_edge_list(read_file(src.path), src.r);
    } catch (const ParseError& e) {
      throw std::runtime_error(src.path + ":" + std::to_string(e.line()) + ": " + e.what());
    }
    std::string name = src.path;
    if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
    out.info["source"] = name;
  } else {
    FamilySpec spec{parse_family(src.family), src.n, src.n2, src.r.value_or(1)};
    if (spec.family == Family::complete_multigraph && !src.r) throw UsageError("complete-multigraph needs --r");
    out.graph = generate_family(spec);
    out.family = spec;
    out.info["source"] = "family";
    out.info["family"] = family_name(spec.family);
  }
  out.info["vertices"] = out.graph.vertex_count();
  out.info["edges"] = out.graph.edge_count();
  out.info["multiplicity"] = out.graph.multiplicity();
  Json iso = Json::array();
  for (auto v : out.graph.isolated_vertices()) {
    iso.push_back(v.value);
    std::cerr << "pir: warning: vertex " << v.value << " stores no files and is left out of the scheme\n";
  }
  out.info["isolated"] = iso;
  if (out.graph.edge_count() == 0) throw std::runtime_error("graph stores no files");
  return out;
}

IndependentPartition build_partition(const StorageGraph& g, const GraphSource& src) {
  if (!src.sets.empty()) {
    if (!src.order.empty()) throw UsageError("--sets and --order are mutually exclusive");
    std::vector<std::vector<VertexId>> sets;
    std::stringstream ss(src.sets);
    std::string part;
    while (std::getline(ss, part, '/')) {
      std::vector<VertexId> s;
      for (auto v : parse_list(part, ',', "--sets")) s.push_back(VertexId{v});
      sets.push_back(std::move(s));
    }
    try {
      return IndependentPartition::from_sets(g, std::move(sets));
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("invalid --sets: ") + e.what());
    }
  }
  if (src.partition == "largest") {
    if (!src.order.empty()) throw UsageError("--order only applies to the greedy partition");
    return largest_independent_partition(g);
  }
  if (src.partition != "greedy") throw UsageError("--partition must be greedy or largest");
  if (src.order.empty()) return greedy_independent_partition(g);
  std::vector<VertexId> order;
  for (auto v : parse_list(src.order, ',', "--order")) order.push_back(VertexId{v});
  try {
    return greedy_independent_partition(g, order);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("invalid --order: ") + e.what());
  }
}

Json partition_json(const IndependentPartition& p) {
  Json j = Json::array();
  for (const auto& s : p.sets()) {
    Json set = Json::array();
    for (auto v : s) set.push_back(v.value);
    j.push_back(set);
  }
  return j;
}

EdgeId parse_edge(const StorageGraph& g, const std::string& text) {
  const auto parts = parse_list(text, ',', "edge");
  if (parts.size() != 2 && parts.size() != 3) throw UsageError("edge must be i,j or i,j,k");
  const std::uint32_t k = parts.size() == 3 ? parts[2] : 1;
  if (parts[0] > g.vertex_count() || parts[1] > g.vertex_count()) throw UsageError("edge " + text + " names an unknown vertex");
  const auto e = g.find_edge(VertexId{parts[0]}, VertexId{parts[1]}, k);
  if (!e) throw UsageError("edge " + text + " is not in the graph");
  return *e;
}

GraphMutation graph_mutation(const std::string& m) {
  if (m == "none") return GraphMutation::none;
  if (m == "shift_at_upstream_endpoint") return GraphMutation::shift_at_upstream_endpoint;
  if (m == "coin_shared_across_groups") return GraphMutation::coin_shared_across_groups;
  throw UsageError("unknown graph mutation '" + m + "'");
}

StarMutation star_mutation(const std::string& m) {
  if (m == "none") return StarMutation::none;
  if (m == "theta_excluded_from_side_info") return StarMutation::theta_excluded_from_side_info;
  throw UsageError("unknown star mutation '" + m + "'");
}

StarParams star_params(const StarOptions& s) {
  if (s.k == 0) throw UsageError("--k must be positive");
  try {
    return s.u ? make_star_params(s.k, *s.u) : optimize_params(s.k);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

Json star_params_json(const StarParams& p) {
  return Json{{"files", p.files},   {"padded_files", p.padded_files}, {"side_info", p.side_info},
              {"rows", p.rows()},   {"columns", p.columns()},         {"hub_server", p.hub_server()}};
}

Json audit_json(const AuditReport& r) {
  Json servers = Json::array();
  for (const auto& s : r.servers) {
    Json j{{"server", s.server}};
    if (r.exact) {
      j["max_tv"] = rational(s.max_tv);
    } else {
      j["p_value"] = *s.p_value;
      j["statistic"] = *s.statistic;
      j["dof"] = s.dof;
    }
    servers.push_back(j);
  }
  Json j{{"mode", r.exact ? "exact" : "statistical"}, {"thetas", r.thetas}};
  if (!r.exact) {
    j["trials"] = r.trials;
    j["significance"] = r.significance;
    j["per_server_threshold"] = r.significance / static_cast<double>(std::max<std::size_t>(1, r.servers.size()));
  }
  j["servers"] = servers;
  j["pass"] = r.pass;
  return j;
}

// ---------------------------------------------------------------------------
// Commands.

int star_run(const Options& o) {
  const auto p = star_params(o.star);
  const auto seed = resolve_seed(o.common);
  if (o.bits == 0) throw UsageError("--bits must be positive");
  Rng store_rng(derive_seed(seed.value, 0));
  const auto store = make_star_store(p, o.bits, store_rng);
  Rng rng(derive_seed(seed.value, 1));
  const std::uint32_t theta = o.theta_index ? *o.theta_index : static_cast<std::uint32_t>(1 + rng.below(p.files));
  if (theta == 0 || theta > p.files) throw UsageError("--theta must lie in 1..K");
  const auto t = run_star_transcript(theta, p, store, rng);

  Json j{{"command", "star run"}};
  put_seed(j, seed);
  j["params"] = star_params_json(p);
  j["theta"] = theta;
  j["payload_bits"] = o.bits;
  Json u = Json::array();
  for (auto i : t.queries.side_info) u.push_back(i);
  j["side_info_set"] = u;
  Json servers = Json::array();
  for (std::uint32_t i = 1; i <= p.padded_files; ++i)
    servers.push_back(Json{{"server", i},
                           {"query", t.queries.spokes[i - 1] ? "fetch" : "null"},
                           {"download", t.queries.spokes[i - 1] ? 1 : 0}});
  servers.push_back(Json{{"server", p.hub_server()},
                         {"query", t.queries.hub ? t.queries.hub->encode() : "null"},
                         {"download", t.queries.hub ? t.queries.hub->cols() : 0}});
  j["servers"] = servers;
  j["download_units"] = t.queries.download_units();
  j["download_bits"] = t.queries.download_units() * o.bits;
  j["exact_D"] = rational_json(star_expected_download(p));
  const bool ok = t.decoded == store.at(theta - 1);
  j["decoded"] = t.decoded.to_hex();
  j["stored"] = store.at(theta - 1).to_hex();
  j["decoded_matches"] = ok;
  emit(j, o.common);
  return ok ? 0 : 1;
}

int star_rate(const Options& o) {
  const auto p = star_params(o.star);
  const auto seed = resolve_seed(o.common);
  if (o.trials == 0) throw UsageError("--trials must be positive");
  const auto exact = star_expected_download(p);
  const auto guarantee = star_download_guarantee(p.files);
  const auto mc = monte_carlo_star(p, o.trials, seed.value, 1, workers(o.common));
  const auto optimal = optimize_params(p.files);

  Json j{{"command", "star rate"}};
  put_seed(j, seed);
  j["params"] = star_params_json(p);
  j["optimizer_choice"] = star_params_json(optimal);
  j["square_padding_choice"] = star_params_json(square_padding_params(p.files));
  j["exact_D"] = rational_json(exact);
  j["exact_rate"] = rational_json(1 / exact);
  j["guarantee_D"] = rational_json(guarantee);
  j["mc"] = mc_json(mc);
  std::vector<RateCheck> checks{{"mc_within_3se", mc.within(exact)}, {"mc_decodes", mc.decode_failures == 0}};
  if (p.padded_files == optimal.padded_files && p.side_info == optimal.side_info)
    checks.push_back({"exact_D<=guarantee", exact <= guarantee});
  bool all = true;
  j["checks"] = checks_json(checks, all);
  j["all_checks_pass"] = all;
  emit(j, o.common);
  return all ? 0 : 1;
}

int star_audit(const Options& o) {
  const auto p = star_params(o.star);
  const auto mutation = star_mutation(o.mutation);
  const auto r = audit_star_exact(p, mutation, o.max_padded);
  Json j{{"command", "audit star"}};
  j["params"] = star_params_json(p);
  if (mutation != StarMutation::none) j["mutation"] = o.mutation;
  j["audit"] = audit_json(r);
  j["pass"] = r.pass;
  emit(j, o.common);
  return r.pass ? 0 : 1;
}

int graph_run(const Options& o) {
  const auto lg = load_graph(o.graph);
  const auto& g = lg.graph;
  const auto p = build_partition(g, o.graph);
  const auto seed = resolve_seed(o.common);
  if (o.bits == 0) throw UsageError("--bits must be positive");
  Rng store_rng(derive_seed(seed.value, 0));
  const auto store = FileStore::random(g.edge_count(), o.bits, store_rng);
  Rng rng(derive_seed(seed.value, 1));
  const EdgeId theta = o.theta.empty() ? EdgeId{static_cast<std::uint32_t>(rng.below(g.edge_count()))} : parse_edge(g, o.theta);

  const CoinLayout layout(g, p);
  const auto coins = o.zero_coins ? CoinAssignment::zeros(layout) : CoinAssignment::draw(layout, rng);
  const auto q = build_graph_queries(g, p, layout, coins, theta);
  std::vector<std::optional<Payload>> answers(g.vertex_count());
  for (auto v : p.order()) answers[v.value - 1] = server_respond(p, v, q[v.value - 1], store);
  const auto decoded = decode(answers, o.bits);

  Json j{{"command", "graph run"}};
  put_seed(j, seed);
  j["graph"] = lg.info;
  j["partition"] = partition_json(p);
  j["theta"] = to_string(g.edge(theta));
  j["payload_bits"] = o.bits;
  if (o.zero_coins) j["zero_coins"] = true;
  Json servers = Json::array();
  std::size_t units = 0;
  for (auto v : p.order()) {
    Json slots = Json::array();
    for (auto e : p.slots(v)) slots.push_back(to_string(g.edge(e)));
    const bool answered = answers[v.value - 1].has_value();
    units += answered;
    servers.push_back(
        Json{{"server", v.value}, {"slots", slots}, {"query", q[v.value - 1].encode()}, {"download", answered ? 1 : 0}});
  }
  j["servers"] = servers;
  j["download_units"] = units;
  j["download_bits"] = units * o.bits;
  j["exact_D"] = rational_json(expected_download(g, p));
  const bool ok = decoded == store.at(theta.value);
  j["decoded"] = decoded.to_hex();
  j["stored"] = store.at(theta.value).to_hex();
  j["decoded_matches"] = ok;
  emit(j, o.common);
  return ok ? 0 : 1;
}

int graph_rate(const Options& o) {
  const auto lg = load_graph(o.graph);
  const auto p = build_partition(lg.graph, o.graph);
  const auto seed = resolve_seed(o.common);
  if (o.trials == 0) throw UsageError("--trials must be positive");
  const auto exact = expected_download(lg.graph, p);
  const auto mc = monte_carlo_graph(lg.graph, p, o.trials, seed.value, 1, workers(o.common));
  Json j{{"command", "graph rate"}};
  put_seed(j, seed);
  j["graph"] = lg.info;
  j["partition"] = partition_json(p);
  j["exact_D"] = rational_json(exact);
  j["exact_rate"] = rational_json(1 / exact);
  j["mc"] = mc_json(mc);
  bool all = true;
  j["checks"] = checks_json({{"mc_within_3se", mc.within(exact)}, {"mc_decodes", mc.decode_failures == 0}}, all);
  j["all_checks_pass"] = all;
  emit(j, o.common);
  return all ? 0 : 1;
}

int graph_download(const Options& o) {
  const auto lg = load_graph(o.graph);
  const auto& g = lg.graph;
  const auto p = build_partition(g, o.graph);
  const auto b = rate_bounds(g, p);
  Json j{{"command", "graph download"}};
  j["graph"] = lg.info;
  j["partition"] = partition_json(p);
  Json servers = Json::array();
  for (auto v : p.order()) {
    const auto p0 = null_query_probability(g, p, v);
    servers.push_back(Json{{"server", v.value},
                           {"set", p.set_index(v)},
                           {"degree", g.degree(v)},
                           {"downstream", p.downstream_degree(v)},
                           {"constraining_coins", constraining_coins(g, p, v)},
                           {"p_null", rational(p0)},
                           {"p_non_null", rational(1 - p0)}});
  }
  j["servers"] = servers;
  j["exact_D"] = to_double(b.expected_download);
  j["exact_D_rational"] = rational(b.expected_download);
  j["rate"] = rational_json(b.rate);
  Json bounds{{"servers", b.servers},
              {"alpha", b.alpha},
              {"alpha_exact", b.alpha_exact},
              {"first_set_size", b.first_set_size},
              {"alpha_term", rational_json(b.alpha_term)},
              {"complete_term", rational_json(b.complete_term)},
              {"claimed", rational_json(b.claimed_bound)}};
  bounds["asserted"] = b.asserted_bound ? rational_json(*b.asserted_bound) : Json(nullptr);
  if (g.multiplicity() > 1 || (lg.family && lg.family->family == Family::complete_multigraph))
    bounds["multigraph_closed_form_D"] = rational_json(complete_multigraph_closed_form(b.servers, g.multiplicity()));
  j["bounds"] = bounds;
  if (lg.family) {
    Json ref = Json::array();
    for (const auto& v : baseline_table(*lg.family)) ref.push_back(bound_json(v));
    j["reference_bounds"] = ref;
  }
  j["bound_chain_holds"] = b.bound_holds;
  emit(j, o.common);
  return b.bound_holds ? 0 : 1;
}

int audit_graph(const Options& o) {
  const auto lg = load_graph(o.graph);
  const auto& g = lg.graph;
  const auto p = build_partition(g, o.graph);
  const auto mutation = graph_mutation(o.mutation);
  const auto r = audit_graph_exact(g, p, mutation, o.max_coins);
  bool uniform = true;
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) uniform = uniform && per_bit_uniformity(g, p, EdgeId{e}, mutation).pass();
  Json j{{"command", "audit graph"}};
  j["graph"] = lg.info;
  j["partition"] = partition_json(p);
  j["coins"] = CoinLayout(g, p, mutation).size();
  if (mutation != GraphMutation::none) j["mutation"] = o.mutation;
  j["audit"] = audit_json(r);
  j["bit_uniformity"] = uniform;
  const bool pass = r.pass && uniform;
  j["pass"] = pass;
  emit(j, o.common);
  return pass ? 0 : 1;
}

int audit_stat(const Options& o) {
  const auto seed = resolve_seed(o.common);
  if (o.theta_a.empty() || o.theta_b.empty()) throw UsageError("--theta-a and --theta-b are required");
  Json j{{"command", "audit stat"}};
  put_seed(j, seed);
  AuditReport r;
  try {
    if (o.star.k > 0) {
      if (!o.graph.path.empty() || !o.graph.family.empty()) throw UsageError("give either --k or a graph, not both");
      const auto p = star_params(o.star);
      const auto a = parse_list(o.theta_a, ',', "--theta-a");
      const auto b = parse_list(o.theta_b, ',', "--theta-b");
      if (a.size() != 1 || b.size() != 1 || a[0] > p.files || b[0] > p.files)
        throw UsageError("star thetas must be single file indices in 1..K");
      j["params"] = star_params_json(p);
      j["theta_a"] = a[0];
      j["theta_b"] = b[0];
      r = statistical_audit_star(p, a[0], b[0], o.trials, o.significance, seed.value, star_mutation(o.mutation),
                                 workers(o.common));
    } else {
      const auto lg = load_graph(o.graph);
      const auto p = build_partition(lg.graph, o.graph);
      const auto ta = parse_edge(lg.graph, o.theta_a);
      const auto tb = parse_edge(lg.graph, o.theta_b);
      j["graph"] = lg.info;
      j["partition"] = partition_json(p);
      j["theta_a"] = to_string(lg.graph.edge(ta));
      j["theta_b"] = to_string(lg.graph.edge(tb));
      r = statistical_audit_graph(lg.graph, p, ta, tb, o.trials, o.significance, seed.value,
                                  graph_mutation(o.mutation), workers(o.common));
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.mutation != "none") j["mutation"] = o.mutation;
  j["audit"] = audit_json(r);
  j["pass"] = r.pass;
  emit(j, o.common);
  return r.pass ? 0 : 1;
}

Json record_json(const RateRecord& r) {
  Json j{{"family", family_name(r.family.family)}, {"N", r.servers}};
  if (r.family.family == Family::bipartite) {
    j["N1"] = r.family.n;
    j["N2"] = r.family.n2;
  }
  j["r"] = r.family.r;
  j["K"] = r.files;
  j["scheme"] = r.scheme;
  if (r.star_params) j["star_params"] = star_params_json(*r.star_params);
  j["exact_D"] = rational_json(*r.exact_download);
  j["rate"] = rational_json(*r.rate);
  if (r.monte_carlo) j["mc"] = mc_json(*r.monte_carlo);
  Json bounds = Json::array();
  for (const auto& b : r.bounds) bounds.push_back(bound_json(b));
  j["bounds"] = bounds;
  bool all = true;
  j["checks"] = checks_json(r.checks, all);
  j["all_checks_pass"] = all;
  return j;
}

int rate_sweep(const Options& o) {
  SweepConfig cfg;
  try {
    cfg.family = parse_family(o.sweep_family);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cfg.n_min = o.n_min;
  cfg.n_max = o.n_max;
  cfg.r = o.sweep_r;
  cfg.trials = o.sweep_trials;
  const auto seed = resolve_seed(o.common);
  cfg.seed = seed.value;
  if (cfg.n_min > cfg.n_max) throw UsageError("--n-min exceeds --n-max");
  std::vector<RateRecord> rows;
  try {
    rows = compare_report(cfg, workers(o.common));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Json j{{"command", "rate sweep"}, {"family", o.sweep_family}};
  put_seed(j, seed);
  j["trials"] = cfg.trials;
  Json arr = Json::array();
  bool all = true;
  for (const auto& r : rows) {
    arr.push_back(record_json(r));
    all = all && r.all_pass();
  }
  j["rows"] = arr;
  j["all_checks_pass"] = all;
  emit(j, o.common, sweep_csv(rows));
  return all ? 0 : 1;
}

// ---------------------------------------------------------------------------

void add_graph_source(CLI::App* sub, Options& o, bool partition_opts = true) {
  sub->add_option("--graph", o.graph.path, "edge-list file");
  sub->add_option("--family", o.graph.family, "named family: complete, star, bipartite, cycle, path, complete-multigraph");
  sub->add_option("--n", o.graph.n, "vertex count (bipartite: first side)");
  sub->add_option("--n2", o.graph.n2, "second bipartite side");
  sub->add_option("--r", o.graph.r, "multigraph extension")->check(CLI::PositiveNumber);
  if (!partition_opts) return;
  sub->add_option("--partition", o.graph.partition, "greedy or largest")->check(CLI::IsMember({"greedy", "largest"}));
  sub->add_option("--order", o.graph.order, "greedy vertex order, e.g. 2,6,7,1,4,3,5");
  sub->add_option("--sets", o.graph.sets, "explicit partition, e.g. 2,6,7/1,4/3,5");
}

void add_star_params(CLI::App* sub, Options& o, bool k_required) {
  auto* k = sub->add_option("--k", o.star.k, "number of real files (K = N - 1)")->check(CLI::PositiveNumber);
  if (k_required) k->required();
  sub->add_option("--u", o.star.u, "side-information size (default: optimizer)");
}

void add_mutation(CLI::App* sub, Options& o) {
  // Test hook: broken scheme variants the audits must reject.
  sub->add_option("--mutation", o.mutation)->group("");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-replicated private information retrieval simulator"};
  app.require_subcommand(1);
  Options o;
  int (*handler)(const Options&) = nullptr;
  auto bind = [&](CLI::App* sub, int (*fn)(const Options&)) { sub->callback([&handler, fn] { handler = fn; }); };

  auto* star = app.add_subcommand("star", "star-graph scheme")->require_subcommand(1);
  {
    auto* run = star->add_subcommand("run", "one transcript");
    add_star_params(run, o, true);
    run->add_option("--theta", o.theta_index, "desired file (default: drawn from the seed)");
    run->add_option("--bits", o.bits, "payload bits per file");
    add_common(run, o, true);
    bind(run, star_run);

    auto* rate = star->add_subcommand("rate", "exact and Monte-Carlo download");
    add_star_params(rate, o, true);
    rate->add_option("--trials", o.trials, "Monte-Carlo trials");
    add_common(rate, o, true);
    bind(rate, star_rate);

    auto* audit = star->add_subcommand("audit", "exact privacy audit");
    add_star_params(audit, o, true);
    audit->add_option("--max-padded", o.max_padded, "enumeration guard on padded files");
    add_mutation(audit, o);
    add_common(audit, o, false);
    bind(audit, star_audit);
  }

  auto* graph = app.add_subcommand("graph", "general-graph scheme")->require_subcommand(1);
  {
    auto* run = graph->add_subcommand("run", "one transcript");
    add_graph_source(run, o);
    run->add_option("--theta", o.theta, "desired file as i,j or i,j,k (default: drawn from the seed)");
    run->add_option("--bits", o.bits, "payload bits per file");
    run->add_flag("--zero-coins", o.zero_coins)->group("");
    add_common(run, o, true);
    bind(run, graph_run);

    auto* rate = graph->add_subcommand("rate", "exact and Monte-Carlo download");
    add_graph_source(rate, o);
    rate->add_option("--trials", o.trials, "Monte-Carlo trials");
    add_common(rate, o, true);
    bind(rate, graph_rate);

    auto* dl = graph->add_subcommand("download", "exact download, null probabilities and bounds");
    add_graph_source(dl, o);
    add_common(dl, o, false);
    bind(dl, graph_download);
  }

  auto* audit = app.add_subcommand("audit", "privacy audits")->require_subcommand(1);
  {
    auto* s = audit->add_subcommand("star", "exact star audit");
    add_star_params(s, o, true);
    s->add_option("--max-padded", o.max_padded, "enumeration guard on padded files");
    add_mutation(s, o);
    add_common(s, o, false);
    bind(s, star_audit);

    auto* g = audit->add_subcommand("graph", "exact graph audit");
    add_graph_source(g, o);
    g->add_option("--max-coins", o.max_coins, "enumeration guard on coins");
    add_mutation(g, o);
    add_common(g, o, false);
    bind(g, audit_graph);

    auto* st = audit->add_subcommand("stat", "chi-square audit between two desired files");
    add_graph_source(st, o);
    add_star_params(st, o, false);
    st->add_option("--theta-a", o.theta_a, "first desired file")->required();
    st->add_option("--theta-b", o.theta_b, "second desired file")->required();
    st->add_option("--trials", o.trials, "trials per desired file");
    st->add_option("--significance", o.significance, "family-wise significance level");
    add_mutation(st, o);
    add_common(st, o, true);
    bind(st, audit_stat);
  }

  auto* rate = app.add_subcommand("rate", "rate reports")->require_subcommand(1);
  {
    auto* sweep = rate->add_subcommand("sweep", "family sweep against reference bounds");
    sweep->add_option("--family", o.sweep_family, "complete, star, bipartite, cycle, path, complete-multigraph")->required();
    sweep->add_option("--n-min", o.n_min, "smallest N");
    sweep->add_option("--n-max", o.n_max, "largest N");
    sweep->add_option("--r", o.sweep_r, "multiplicity for complete-multigraph")->check(CLI::PositiveNumber);
    sweep->add_option("--trials", o.sweep_trials, "Monte-Carlo trials per row (0 disables)");
    add_common(sweep, o, true);
    bind(sweep, rate_sweep);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return handler(o);
  } catch (const UsageError& e) {
    std::cerr << "pir: " << e.what() << "\n";
    return 2;
  } catch (const GuardExceeded& e) {
    std::cerr << "pir: " << e.what() << " (use audit stat for larger instances)\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "pir: " << e.what() << "\n";
    return 3;
  }
}
