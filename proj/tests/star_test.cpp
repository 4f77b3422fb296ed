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

#include "graphpir/star_pir.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "graphpir/privacy_audit.hpp"
#include "graphpir/rng.hpp"
#include "oracles.hpp"

namespace gpir {
namespace {

TEST(StarParams, DownloadFormula) {
  EXPECT_EQ(star_expected_download(make_star_params(9, 2)), Rational(13, 3));
  EXPECT_EQ(1 / star_expected_download(make_star_params(4, 1)), Rational(2, 5));
  EXPECT_EQ(star_expected_download(make_star_params(5, 0)), Rational(5));
  // K = 5 with u = 1 pads to 6 files.
  const auto p = make_star_params(5, 1);
  EXPECT_EQ(p.padded_files, 6u);
  EXPECT_EQ(p.columns(), 3u);
  EXPECT_EQ(p.hub_server(), 7u);
  EXPECT_EQ(star_expected_download(p), Rational(7, 2));
}

TEST(StarParams, DownloadFormulaMatchesCaseAverage) {
  for (std::uint32_t k = 1; k <= 40; ++k)
    for (auto u : feasible_side_info(k)) {
      const auto p = make_star_params(k, u);
      EXPECT_EQ(star_expected_download(p), oracle::star_download_by_cases(p.padded_files, u)) << k << " " << u;
    }
}

TEST(StarParams, RejectsInvalid) {
  EXPECT_THROW(validate(StarParams{0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(validate(StarParams{4, 3, 0}), std::invalid_argument);
  EXPECT_THROW(validate(StarParams{4, 4, 4}), std::invalid_argument);
  EXPECT_THROW(validate(StarParams{4, 5, 1}), std::invalid_argument);
  EXPECT_NO_THROW(validate(StarParams{4, 6, 2}));
  EXPECT_EQ(make_star_params(3, 3).padded_files, 4u);
  EXPECT_THROW(make_star_params(0, 0), std::invalid_argument);
}

struct OptimumCase {
  std::uint32_t k;
  Rational d;
  std::uint32_t u;
  std::uint32_t padded;
};

TEST(StarOptimizer, KnownOptima) {
  const std::vector<OptimumCase> cases = {{1, 1, 0, 1},
                                          {2, Rational(3, 2), 1, 2},
                                          {3, Rational(7, 3), 2, 3},
                                          {4, Rational(5, 2), 1, 4},
                                          {9, Rational(13, 3), 2, 9},
                                          {15, Rational(31, 5), 4, 15}};
  for (const auto& c : cases) {
    const auto p = optimize_params(c.k);
    EXPECT_EQ(star_expected_download(p), c.d) << c.k;
    EXPECT_EQ(p.side_info, c.u) << c.k;
    EXPECT_EQ(p.padded_files, c.padded) << c.k;
  }
}

TEST(StarOptimizer, MatchesBruteForceOverUAndPadding) {
  for (std::uint32_t k = 1; k <= 250; ++k) {
    const auto p = optimize_params(k);
    const auto best = oracle::brute_star_optimum(k);
    EXPECT_EQ(star_expected_download(p), best.download) << k;
    EXPECT_EQ(p.side_info, best.u) << k;
    EXPECT_EQ(p.padded_files, best.padded) << k;
  }
}

TEST(StarOptimizer, GuaranteeHoldsAndSquarePaddingAttainsIt) {
  for (std::uint32_t k = 1; k <= 2000; ++k) {
    const auto s = static_cast<std::uint32_t>(std::ceil(std::sqrt(static_cast<double>(k + 1)) - 1e-9));
    const Rational closed = Rational(2 * s) - 2 + Rational(1, s + 1);
    ASSERT_EQ(star_download_guarantee(k), closed) << k;
    ASSERT_LE(star_expected_download(optimize_params(k)), closed) << k;
    const auto sq = square_padding_params(k);
    ASSERT_EQ(sq.padded_files + 1, s * s) << k;
    ASSERT_EQ(star_expected_download(sq), closed) << k;
  }
}

TEST(StarQueries, LayoutFromExplicitChoices) {
  const auto p = make_star_params(9, 2);
  StarChoices ch;
  ch.side_info = {5, 2};
  ch.row = 1;
  ch.col = 2;
  ch.side_order = {5, 2};
  ch.rest_order = {9, 1, 3, 4, 6, 7};
  const auto b = build_star_queries(8, p, ch);
  ASSERT_TRUE(b.hub);
  EXPECT_EQ(b.hub->encode(), "9,4,5;1,6,8;3,7,2");
  EXPECT_EQ(b.theta_column, 2u);
  EXPECT_EQ(b.side_info, (std::vector<std::uint32_t>{2, 5}));
  EXPECT_EQ(b.download_units(), 5u);
  EXPECT_EQ(b.spokes[1], SpokeQuery{2});
  EXPECT_FALSE(b.spokes[0]);

  const auto direct = build_star_queries(5, p, ch);
  EXPECT_FALSE(direct.hub);
  EXPECT_EQ(direct.download_units(), 2u);
}

TEST(StarQueries, GeneratedQueriesAreWellFormed) {
  Rng rng(3);
  for (std::uint32_t k = 1; k <= 12; ++k)
    for (auto u : feasible_side_info(k))
      for (int t = 0; t < 30; ++t) {
        const auto p = make_star_params(k, u);
        const auto theta = static_cast<std::uint32_t>(1 + rng.below(k));
        const auto b = star_generate_queries(theta, p, rng);
        EXPECT_EQ(b.side_info.size(), u);
        std::set<std::uint32_t> uniq(b.side_info.begin(), b.side_info.end());
        EXPECT_EQ(uniq.size(), u);
        const bool direct = uniq.contains(theta);
        ASSERT_EQ(b.hub.has_value(), !direct);
        if (b.hub) {
          EXPECT_TRUE(b.hub->is_permutation());
          auto col = b.hub->column(b.theta_column);
          std::set<std::uint32_t> colset(col.begin(), col.end());
          uniq.insert(theta);
          EXPECT_EQ(colset, uniq);
        }
      }
  EXPECT_THROW(star_generate_queries(0, make_star_params(3, 0), rng), std::out_of_range);
  EXPECT_THROW(star_generate_queries(4, make_star_params(3, 0), rng), std::out_of_range);
}

TEST(StarTranscript, DecodesAcrossSeedsAndPayloadSizes) {
  for (std::size_t bits : {1u, 7u, 64u, 130u})
    for (std::uint32_t k = 1; k <= 10; ++k)
      for (auto u : feasible_side_info(optimize_params(k).padded_files)) {
        StarParams p;
        try {
          p = make_star_params(k, u);
        } catch (const std::invalid_argument&) {
          continue;
        }
        Rng rng(derive_seed(bits * 1000 + k, u));
        const auto store = make_star_store(p, bits, rng);
        for (std::uint32_t theta = 1; theta <= k; ++theta)
          for (int t = 0; t < 5; ++t) {
            const auto tr = run_star_transcript(theta, p, store, rng);
            ASSERT_EQ(tr.decoded, store.at(theta - 1)) << "K=" << k << " u=" << u << " theta=" << theta;
          }
      }
}

TEST(StarTranscript, DummyFilesAreZero) {
  Rng rng(1);
  const auto p = make_star_params(5, 2);
  const auto store = make_star_store(p, 32, rng);
  EXPECT_EQ(store.size(), 6u);
  EXPECT_TRUE(store.at(5).is_zero());
}

TEST(StarServers, RejectMalformedQueries) {
  Rng rng(1);
  const auto p = make_star_params(4, 1);
  const auto store = make_star_store(p, 8, rng);
  EXPECT_THROW(star_spoke_respond(2, SpokeQuery{3}, store), ProtocolViolation);
  EXPECT_FALSE(star_spoke_respond(2, std::nullopt, store));
  QueryMatrix bad(2, 2);
  bad.set(0, 0, 1);
  bad.set(0, 1, 1);
  bad.set(1, 0, 3);
  bad.set(1, 1, 4);
  EXPECT_THROW(star_hub_respond(bad, store), ProtocolViolation);
  StarQueryBundle empty;
  std::vector<std::optional<Payload>> none(4);
  EXPECT_THROW(star_decode(1, empty, none, std::nullopt), DecodeError);
}

// Closed-form per-server query probabilities: a spoke is queried with
// probability u/K'', the hub is null with probability u/K'', and every one
// of the K''! query matrices has probability ((K''-u)/K'') / K''!.
TEST(StarDistribution, EnumerationMatchesClosedForms) {
  for (std::uint32_t padded = 1; padded <= 6; ++padded)
    for (auto u : feasible_side_info(padded))
      for (std::uint32_t files = 1; files <= padded; ++files) {
        const StarParams p{files, padded, u};
        for (std::uint32_t theta = 1; theta <= files; ++theta) {
          const auto d = star_exact_distribution(p, theta);
          ASSERT_EQ(d.size(), padded + 1u);
          for (std::uint32_t i = 1; i <= padded; ++i) {
            EXPECT_EQ(d[i - 1].mass(), 1);
            EXPECT_EQ(d[i - 1].probability(star_spoke_key(i, SpokeQuery{i})), Rational(u, padded));
            EXPECT_EQ(d[i - 1].probability(star_spoke_key(i, std::nullopt)), Rational(padded - u, padded));
          }
          const auto& hub = d[padded];
          EXPECT_EQ(hub.mass(), 1);
          EXPECT_EQ(hub.probability(star_hub_key(padded + 1, std::nullopt)), Rational(u, padded));
          const Rational each = Rational(padded - u, padded) / Rational(oracle::factorial(padded));
          std::size_t matrices = 0;
          for (const auto& [key, count] : hub.counts()) {
            if (key == star_hub_key(padded + 1, std::nullopt)) continue;
            ++matrices;
            EXPECT_EQ(hub.probability(key), each) << key;
          }
          EXPECT_EQ(BigInt(matrices), oracle::factorial(padded));
        }
      }
}

TEST(StarDistribution, GuardRefusesLargeInstances) {
  EXPECT_THROW(star_exact_distribution(make_star_params(9, 2), 1), GuardExceeded);
  EXPECT_NO_THROW(star_exact_distribution(make_star_params(9, 2), 1, StarMutation::none, 9));
}

TEST(StarDistribution, MutationLeaksTheta) {
  const auto p = make_star_params(4, 1);
  const auto honest = audit_star_exact(p);
  EXPECT_TRUE(honest.pass);
  const auto broken = audit_star_exact(p, StarMutation::theta_excluded_from_side_info);
  EXPECT_FALSE(broken.pass);
  // Spoke 1 is never queried when file 1 is wanted, but sometimes is otherwise.
  EXPECT_EQ(broken.servers[0].max_tv, Rational(1, 3));
}

}  // namespace
}  // namespace gpir
