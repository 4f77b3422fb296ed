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

// Download measurement and comparison. Downloads are counted in file-size
// units: every non-null answer costs one file, a null query costs nothing.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphpir/baselines.hpp"
#include "graphpir/common.hpp"
#include "graphpir/families.hpp"
#include "graphpir/graph.hpp"
#include "graphpir/graph_pir.hpp"
#include "graphpir/parallel.hpp"
#include "graphpir/partition.hpp"
#include "graphpir/payload.hpp"
#include "graphpir/rng.hpp"
#include "graphpir/star_pir.hpp"

namespace gpir {

struct MonteCarloEstimate {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double mean = 0;
  double std_error = 0;
  std::size_t decode_failures = 0;

  double rate() const { return mean > 0 ? 1 / mean : 0; }

  /// |mean - exact| <= k standard errors. A zero-variance estimate must hit
  /// the exact value.
  bool within(const Rational& exact, double k = 3) const {
    const double diff = std::abs(mean - to_double(exact));
    return std_error == 0 ? diff < 1e-12 : diff <= k * std_error;
  }
};

namespace detail {

struct TrialSums {
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
  std::size_t failures = 0;
};

inline MonteCarloEstimate finish(const std::vector<TrialSums>& parts, std::size_t trials, std::uint64_t seed) {
  TrialSums t;
  for (const auto& p : parts) {
    t.sum += p.sum;
    t.sum_sq += p.sum_sq;
    t.failures += p.failures;
  }
  MonteCarloEstimate e;
  e.trials = trials;
  e.seed = seed;
  e.decode_failures = t.failures;
  const double m = static_cast<double>(trials);
  e.mean = static_cast<double>(t.sum) / m;
  if (trials > 1) {
    // Integer sums keep the result independent of how trials were chunked.
    const double var = (static_cast<double>(t.sum_sq) - static_cast<double>(t.sum) * e.mean) / (m - 1);
    e.std_error = std::sqrt(std::max(0.0, var) / m);
  }
  return e;
}

inline constexpr std::size_t kTrialChunk = 2048;

}  // namespace detail

/// Full star transcripts with the desired file uniform over the real files.
/// One store is drawn per run (stream 0 of the seed); trial t uses stream
/// t + 1.
inline MonteCarloEstimate monte_carlo_star(const StarParams& p, std::size_t trials, std::uint64_t seed,
                                           std::size_t payload_bits = 1, const ParallelMap& pmap = ParallelMap()) {
  validate(p);
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  Rng store_rng(derive_seed(seed, 0));
  const auto store = make_star_store(p, payload_bits, store_rng);
  const auto chunks = chunk_ranges(trials, detail::kTrialChunk);
  auto parts = pmap(chunks.size(), [&](std::size_t c) {
    detail::TrialSums s;
    for (std::size_t t = chunks[c].begin; t < chunks[c].end; ++t) {
      Rng rng(derive_seed(seed, t + 1));
      const auto theta = static_cast<std::uint32_t>(1 + rng.below(p.files));
      const auto tr = run_star_transcript(theta, p, store, rng);
      const std::uint64_t d = tr.queries.download_units();
      s.sum += d;
      s.sum_sq += d * d;
      if (tr.decoded != store.at(theta - 1)) ++s.failures;
    }
    return s;
  });
  return detail::finish(parts, trials, seed);
}

/// Full general-graph transcripts with the desired file uniform over edges.
/// `zero_coins` forces every coin to 0 (debug hook).
inline MonteCarloEstimate monte_carlo_graph(const StorageGraph& g, const IndependentPartition& p, std::size_t trials,
                                            std::uint64_t seed, std::size_t payload_bits = 1,
                                            const ParallelMap& pmap = ParallelMap(), bool zero_coins = false) {
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  if (g.edge_count() == 0) throw std::invalid_argument("graph stores no files");
  Rng store_rng(derive_seed(seed, 0));
  const auto store = FileStore::random(g.edge_count(), payload_bits, store_rng);
  const CoinLayout layout(g, p);
  const auto chunks = chunk_ranges(trials, detail::kTrialChunk);
  auto parts = pmap(chunks.size(), [&](std::size_t c) {
    detail::TrialSums s;
    for (std::size_t t = chunks[c].begin; t < chunks[c].end; ++t) {
      Rng rng(derive_seed(seed, t + 1));
      const EdgeId theta{static_cast<std::uint32_t>(rng.below(g.edge_count()))};
      const auto coins = zero_coins ? CoinAssignment::zeros(layout) : CoinAssignment::draw(layout, rng);
      const auto q = build_graph_queries(g, p, layout, coins, theta);
      std::vector<std::optional<Payload>> answers(g.vertex_count());
      for (auto v : p.order()) answers[v.value - 1] = server_respond(p, v, q[v.value - 1], store);
      std::uint64_t d = 0;
      for (const auto& a : answers) d += a.has_value();
      s.sum += d;
      s.sum_sq += d * d;
      if (decode(answers, payload_bits) != store.at(theta.value)) ++s.failures;
    }
    return s;
  });
  return detail::finish(parts, trials, seed);
}

struct RateCheck {
  std::string id;
  bool pass = true;
};

struct RateRecord {
  std::string scheme;  // "star" or "graph"
  FamilySpec family;
  std::uint32_t servers = 0;
  std::uint32_t files = 0;
  std::optional<Rational> exact_download;
  std::optional<MonteCarloEstimate> monte_carlo;
  std::optional<Rational> rate;
  std::vector<BoundValue> bounds;  // ours first, then the reference table
  std::vector<RateCheck> checks;
  std::optional<StarParams> star_params;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

// Irrational reference values only exist as doubles; allow rounding slack.
inline bool rate_at_most(const Rational& rate, const BoundValue& b) {
  if (b.exact) return rate <= *b.exact;
  return to_double(rate) <= b.value * (1 + 1e-12);
}

inline bool rate_at_least(const Rational& rate, const BoundValue& b) {
  if (b.exact) return rate >= *b.exact;
  return to_double(rate) >= b.value * (1 - 1e-12);
}

}  // namespace detail

/// One row of a family sweep: exact download, optional Monte-Carlo estimate,
/// our lower bounds, the reference table and every assertable inequality.
inline RateRecord evaluate_family(const FamilySpec& spec, std::size_t trials, std::uint64_t seed,
                                  const ParallelMap& pmap = ParallelMap()) {
  RateRecord rec;
  rec.family = spec;
  const auto reference = baseline_table(spec);

  if (spec.family == Family::star) {
    rec.scheme = "star";
    if (spec.n < 2) throw std::invalid_argument("star needs N >= 2");
    const auto params = optimize_params(spec.n - 1);
    rec.star_params = params;
    rec.servers = spec.n;
    rec.files = spec.n - 1;
    rec.exact_download = star_expected_download(params);
    const auto guarantee = star_download_guarantee(params.files);
    rec.bounds.push_back(detail::exact_bound("ours_star_guarantee", "this scheme, closed-form guarantee",
                                             "1/(2 sqrt(N') - 2 + 1/(sqrt(N') + 1))", BoundKind::lower, 1 / guarantee,
                                             true));
    const auto square = square_padding_params(params.files);
    rec.bounds.push_back(detail::exact_bound("ours_star_square_padding", "this scheme, square padding choice",
                                             "(u+1)/(u^2 + K'), K'+1 = s^2, u = s", BoundKind::lower,
                                             1 / star_expected_download(square), false));
    if (trials > 0) rec.monte_carlo = monte_carlo_star(params, trials, seed, 1, pmap);
  } else {
    rec.scheme = "graph";
    const auto g = generate_family(spec);
    const auto p = greedy_independent_partition(g);
    const auto b = rate_bounds(g, p);
    rec.servers = g.vertex_count();
    rec.files = static_cast<std::uint32_t>(g.edge_count());
    rec.exact_download = b.expected_download;
    if (b.asserted_bound)
      rec.bounds.push_back(detail::exact_bound("ours_graph_bound", "this scheme, alpha-based guarantee",
                                               g.multiplicity() == 1 ? "max(2/(2N - alpha), 1/(N-1))"
                                                                     : "1/(N - alpha 2^{-r})",
                                               BoundKind::lower, *b.asserted_bound, true));
    if (g.multiplicity() > 1 || spec.family == Family::complete_multigraph) {
      const auto closed = complete_multigraph_closed_form(g.vertex_count(), g.multiplicity());
      rec.bounds.push_back(detail::exact_bound("ours_multigraph_closed_form", "this scheme, quoted closed form",
                                               "1/(N - 2^{1-r})", BoundKind::lower, 1 / closed,
                                               g.multiplicity() == 1 && b.alpha == 1));
    }
    if (spec.family == Family::bipartite) {
      const Rational n = g.vertex_count();
      rec.bounds.push_back(detail::exact_bound("ours_bipartite", "this scheme, bipartite case", "4/(3N)",
                                               BoundKind::lower, Rational(4) / (3 * n), spec.n >= spec.n2));
    }
    if (spec.family == Family::complete && g.multiplicity() == 1) {
      rec.bounds.push_back(detail::exact_bound("ours_complete", "this scheme, complete graph", "1/(N-1)",
                                               BoundKind::lower, 1 / Rational(g.vertex_count() - 1), true));
    }
    if (trials > 0) rec.monte_carlo = monte_carlo_graph(g, p, trials, seed, 1, pmap);
  }
  rec.rate = 1 / *rec.exact_download;
  rec.bounds.insert(rec.bounds.end(), reference.begin(), reference.end());

  for (const auto& b : rec.bounds) {
    if (!b.assertable) continue;
    const bool ok = b.kind == BoundKind::lower ? detail::rate_at_least(*rec.rate, b) : detail::rate_at_most(*rec.rate, b);
    rec.checks.push_back({(b.kind == BoundKind::lower ? "rate>=" : "rate<=") + b.id, ok});
  }
  if (spec.family == Family::complete && spec.r == 1)
    rec.checks.push_back({"rate==1/(N-1)", *rec.rate == 1 / Rational(rec.servers - 1)});
  if (rec.monte_carlo) {
    rec.checks.push_back({"mc_within_3se", rec.monte_carlo->within(*rec.exact_download)});
    rec.checks.push_back({"mc_decodes", rec.monte_carlo->decode_failures == 0});
  }
  return rec;
}

struct SweepConfig {
  Family family = Family::complete;
  std::uint32_t n_min = 3;
  std::uint32_t n_max = 8;
  std::uint32_t r = 1;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

/// Families are parametrised by N. Bipartite sweeps use sides
/// (ceil(N/2), floor(N/2)) and consequently yield K_{N/2,N/2} for even N.
inline FamilySpec family_instance(Family f, std::uint32_t n, std::uint32_t r) {
  FamilySpec s{f, n, 0, r};
  if (f == Family::bipartite) {
    s.n = (n + 1) / 2;
    s.n2 = n / 2;
  }
  if (f != Family::complete_multigraph) s.r = 1;
  return s;
}

inline std::vector<RateRecord> compare_report(const SweepConfig& cfg, const ParallelMap& pmap = ParallelMap()) {
  if (cfg.n_min > cfg.n_max) throw std::invalid_argument("n-min exceeds n-max");
  std::vector<RateRecord> out;
  for (std::uint32_t n = cfg.n_min; n <= cfg.n_max; ++n)
    out.push_back(evaluate_family(family_instance(cfg.family, n, cfg.r), cfg.trials, derive_seed(cfg.seed, n), pmap));
  return out;
}

inline const char* kSweepCsvHeader =
    "family,N,N1,N2,r,K,scheme,exact_D,exact_D_rational,mc_D,mc_se,mc_trials,rate,lower_bounds,upper_bounds,checks,"
    "all_pass";

/// Bound and check cells hold `id=value` pairs joined by ';'.
inline std::string sweep_csv(const std::vector<RateRecord>& rows) {
  auto num = [](double v) {
    std::ostringstream s;
    s.precision(12);
    s << v;
    return s.str();
  };
  std::string out = std::string(kSweepCsvHeader) + "\n";
  for (const auto& r : rows) {
    std::string lower, upper, checks;
    for (const auto& b : r.bounds) {
      auto& cell = b.kind == BoundKind::lower ? lower : upper;
      if (!cell.empty()) cell += ';';
      cell += b.id + "=" + num(b.value);
    }
    for (const auto& c : r.checks) {
      if (!checks.empty()) checks += ';';
      checks += c.id + "=" + (c.pass ? "pass" : "fail");
    }
    const bool bip = r.family.family == Family::bipartite;
    out += family_name(r.family.family) + "," + std::to_string(r.servers) + "," +
           (bip ? std::to_string(r.family.n) : "") + "," + (bip ? std::to_string(r.family.n2) : "") + "," +
           std::to_string(r.family.r) + "," + std::to_string(r.files) + "," + r.scheme + "," +
           num(to_double(*r.exact_download)) + "," + to_string(*r.exact_download) + "," +
           (r.monte_carlo ? num(r.monte_carlo->mean) : "") + "," + (r.monte_carlo ? num(r.monte_carlo->std_error) : "") +
           "," + (r.monte_carlo ? std::to_string(r.monte_carlo->trials) : "0") + "," + num(to_double(*r.rate)) + "," +
           lower + "," + upper + "," + checks + "," + (r.all_pass() ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace gpir
