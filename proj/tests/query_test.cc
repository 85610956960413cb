// Copyright 2026 The longsynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "longsynth/query.h"

#include <gtest/gtest.h>

#include "longsynth/window_synth.h"
#include "test_util.h"

namespace longsynth {
namespace {

using ::longsynth::testing::CountAtLeast;
using ::longsynth::testing::RandomDataset;
using ::longsynth::testing::RandomRows;

SyntheticStore StoreOf(const BitPanel& panel) {
  SyntheticStore store(panel.population());
  for (int t = 1; t <= panel.rounds(); ++t) {
    auto col = panel.column(t);
    EXPECT_TRUE(store.Append({col.begin(), col.end()}).ok());
  }
  return store;
}

TEST(EvalQueryTest, AllOnesWindow) {
  std::vector<std::vector<uint8_t>> rows(7, std::vector<uint8_t>(3, 1));
  auto data = *LongitudinalDataset::FromRows(rows);
  EXPECT_DOUBLE_EQ(*EvalQuery(data, WindowQuery{*SuffixKey::Parse("111"), 3}),
                   1.0);
  EXPECT_DOUBLE_EQ(*EvalQuery(data, WindowQuery{*SuffixKey::Parse("011"), 3}),
                   0.0);
}

TEST(EvalQueryTest, CumulativeExample) {
  auto data = *LongitudinalDataset::FromRows({{1, 1, 0}, {0, 1, 1}, {0, 0, 0}});
  EXPECT_DOUBLE_EQ(*EvalQuery(data, CumulativeQuery{2, 3}), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*EvalQuery(data, CumulativeQuery{0, 3}), 1.0);
  EXPECT_DOUBLE_EQ(*EvalQuery(data, CumulativeQuery{4, 3}), 0.0);
}

TEST(EvalQueryTest, RoundBeyondDataIsOutOfRange) {
  auto data = *LongitudinalDataset::FromRows({{1, 1}});
  EXPECT_EQ(EvalQuery(data, CumulativeQuery{1, 3}).status().code(),
            absl::StatusCode::kOutOfRange);
}

// At least two ones among the last three bits.
LinearQuery AtLeastTwoOfThree(int t) {
  LinearQuery q{3, t, std::vector<double>(8, 0.0), "two_of_three"};
  for (uint32_t s = 0; s < 8; ++s) q.weights[s] = std::popcount(s) >= 2;
  return q;
}

TEST(EvalQueryTest, LinearMatchesDirectCount) {
  Rng rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    auto rows = RandomRows(rng, 1 + rng.Uniform(uint64_t{40}), 6, 0.5);
    auto data = *LongitudinalDataset::FromRows(rows);
    for (int t = 3; t <= 6; ++t) {
      int64_t direct = 0;
      for (const auto& row : rows) {
        direct += row[t - 3] + row[t - 2] + row[t - 1] >= 2;
      }
      EXPECT_DOUBLE_EQ(*WeightedCount(data, AtLeastTwoOfThree(t)),
                       static_cast<double>(direct));
    }
  }
}

TEST(EvalQueryTest, LinearIsWeightedSumOfBins) {
  Rng rng(2);
  auto data = RandomDataset(rng, 37, 5, 0.4);
  LinearQuery q{2, 4, {0.5, -2.0, 3.0, 1.25}, "mixed"};
  double expected = 0;
  for (uint32_t s = 0; s < 4; ++s) {
    expected += q.weights[s] * *WeightedCount(data, WindowQuery{SuffixKey(2, s), 4});
  }
  EXPECT_DOUBLE_EQ(*WeightedCount(data, q), expected);
}

TEST(DebiasFractionTest, Examples) {
  EXPECT_DOUBLE_EQ(DebiasFraction(140, 135, 1000), 0.005);
  EXPECT_DOUBLE_EQ(DebiasFraction(135, 135, 77), 0.0);
  EXPECT_LT(DebiasFraction(100, 135, 1000), 0);
}

TEST(EvalSyntheticTest, DebiasesWindowRelease) {
  Rng rng(3);
  auto data = RandomDataset(rng, 60, 6, 0.5);
  WindowSynthConfig cfg;
  cfg.horizon = 6;
  cfg.k = 3;
  cfg.noiseless = true;
  cfg.n_pad_override = 4;
  auto synth = *WindowSynthesizer::Create(cfg);
  Rng run_rng(4);
  ASSERT_TRUE(synth.Run(data, run_rng).ok());
  const ReleaseInfo release{ReleaseInfo::Kind::kWindow, 3, 4, 60};
  for (int t = 3; t <= 6; ++t) {
    for (uint32_t s = 0; s < 8; ++s) {
      const QuerySpec q = WindowQuery{SuffixKey(3, s), t};
      auto answer = EvalSynthetic(synth.store(), q, release);
      ASSERT_TRUE(answer.ok());
      EXPECT_DOUBLE_EQ(answer->value, *EvalQuery(data, q));
      EXPECT_FALSE(answer->unsupported);
    }
    // Shorter windows pick up 2^(k - len) padded bins per pattern.
    for (uint32_t s = 0; s < 4; ++s) {
      const QuerySpec q = WindowQuery{SuffixKey(2, s), t};
      EXPECT_NEAR(EvalSynthetic(synth.store(), q, release)->value,
                  *EvalQuery(data, q), 1e-15);
    }
    const QuerySpec linear = AtLeastTwoOfThree(t);
    EXPECT_NEAR(EvalSynthetic(synth.store(), linear, release)->value,
                *EvalQuery(data, linear), 1e-15);
    const QuerySpec cum = CumulativeQuery{2, 3};
    EXPECT_NEAR(EvalSynthetic(synth.store(), cum, release)->value,
                *EvalQuery(data, cum), 1e-15);
  }
}

TEST(EvalSyntheticTest, RefusesLongWindowsUnlessForced) {
  Rng rng(5);
  auto data = RandomDataset(rng, 20, 6, 0.5);
  const SyntheticStore store = StoreOf(data);
  const ReleaseInfo release{ReleaseInfo::Kind::kWindow, 3, 0, 20};
  const QuerySpec q = WindowQuery{*SuffixKey::Parse("1011"), 5};
  auto refused = EvalSynthetic(store, q, release);
  EXPECT_EQ(refused.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_NE(refused.status().message().find("UnsupportedWindow"),
            std::string::npos);
  auto forced = EvalSynthetic(store, q, release, /*force=*/true);
  ASSERT_TRUE(forced.ok());
  EXPECT_TRUE(forced->unsupported);
  EXPECT_DOUBLE_EQ(forced->value, forced->raw);
  EXPECT_FALSE(EvalSynthetic(store, CumulativeQuery{1, 5}, release).ok());
}

TEST(EvalSyntheticTest, CumulativeReleaseOnlyAnswersCumulative) {
  Rng rng(6);
  auto data = RandomDataset(rng, 20, 4, 0.5);
  const SyntheticStore store = StoreOf(data);
  const ReleaseInfo release{ReleaseInfo::Kind::kCumulative, 0, 0, 20};
  auto answer = EvalSynthetic(store, CumulativeQuery{2, 4}, release);
  ASSERT_TRUE(answer.ok());
  EXPECT_DOUBLE_EQ(answer->value, *EvalQuery(data, CumulativeQuery{2, 4}));
  EXPECT_FALSE(
      EvalSynthetic(store, WindowQuery{*SuffixKey::Parse("1"), 4}, release).ok());
}

TEST(CumulativeFromWindowOracleTest, MatchesDirectEvaluation) {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int rounds = 1 + static_cast<int>(rng.Uniform(uint64_t{8}));
    auto rows = RandomRows(rng, 1 + rng.Uniform(uint64_t{20}), rounds, 0.5);
    auto data = *LongitudinalDataset::FromRows(rows);
    for (int t = 1; t <= rounds; ++t) {
      for (int b = 0; b <= t + 1; ++b) {
        const double direct = *EvalQuery(data, CumulativeQuery{b, t});
        EXPECT_EQ(*CumulativeFromWindowOracle(data, b, t), direct);
        EXPECT_EQ(direct, static_cast<double>(CountAtLeast(rows, b, t)) /
                              static_cast<double>(rows.size()));
      }
    }
  }
}

TEST(CumulativeFromWindowOracleTest, Trivial) {
  std::vector<std::vector<uint8_t>> ones(4, std::vector<uint8_t>(5, 1));
  auto data = *LongitudinalDataset::FromRows(ones);
  EXPECT_EQ(*CumulativeFromWindowOracle(data, 0, 3), 1.0);
  EXPECT_EQ(*CumulativeFromWindowOracle(data, 5, 5), 1.0);
  std::vector<std::vector<uint8_t>> wide(2, std::vector<uint8_t>(13, 0));
  EXPECT_EQ(CumulativeFromWindowOracle(*LongitudinalDataset::FromRows(wide), 1, 3)
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(ParseQueriesTest, AllKinds) {
  auto list = nlohmann::json::parse(R"([
    {"kind":"window","s":"101","t":7},
    {"kind":"cum","b":3,"t":12},
    {"kind":"linear","t":7,"weights":{"110":1,"011":1}}
  ])");
  auto queries = ParseQueries(list);
  ASSERT_TRUE(queries.ok());
  ASSERT_EQ(queries->size(), 3u);
  const auto& w = std::get<WindowQuery>((*queries)[0]);
  EXPECT_EQ(w.s.ToString(), "101");
  EXPECT_EQ(w.t, 7);
  const auto& c = std::get<CumulativeQuery>((*queries)[1]);
  EXPECT_EQ(c.b, 3);
  EXPECT_EQ(c.t, 12);
  const auto& l = std::get<LinearQuery>((*queries)[2]);
  EXPECT_EQ(l.k, 3);
  EXPECT_EQ(l.weights, (std::vector<double>{0, 0, 0, 1, 0, 0, 1, 0}));
  EXPECT_EQ(QueryLabel((*queries)[0]), "window:101");
  EXPECT_EQ(QueryLabel((*queries)[1]), "cum:3");
  EXPECT_EQ(QueryWindow((*queries)[1]), 12);
  for (const QuerySpec& q : *queries) {
    auto again = ParseQueries(nlohmann::json::array({QueryToJson(q)}));
    ASSERT_TRUE(again.ok());
    EXPECT_EQ(QueryToJson((*again)[0]), QueryToJson(q));
  }
}

TEST(ParseQueriesTest, Rejects) {
  for (const char* bad : {
           R"({"kind":"window"})",
           R"([{"kind":"window","s":"101","t":2}])",
           R"([{"kind":"window","s":"1x1","t":5}])",
           R"([{"kind":"cum","b":-1,"t":5}])",
           R"([{"kind":"cum","t":5}])",
           R"([{"kind":"linear","t":5,"weights":{"1":1,"10":1}}])",
           R"([{"kind":"linear","t":5,"weights":{}}])",
           R"([{"kind":"median","t":5}])",
           R"([{"s":"1","t":5}])",
       }) {
    EXPECT_EQ(ParseQueries(nlohmann::json::parse(bad)).status().code(),
              absl::StatusCode::kInvalidArgument)
        << bad;
  }
}

TEST(MaxErrorReportTest, NoiselessIsZero) {
  Rng rng(8);
  auto data = RandomDataset(rng, 50, 8, 0.5);
  WindowSynthConfig cfg;
  cfg.horizon = 8;
  cfg.k = 3;
  cfg.noiseless = true;
  auto synth = *WindowSynthesizer::Create(cfg);
  Rng run_rng(9);
  ASSERT_TRUE(synth.Run(data, run_rng).ok());
  auto report = MaxErrorReport(data, synth.store(), {8, 3, PrivacyBudget::Zero(), 0.05, 0});
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(report->rounds.size(), 6u);
  EXPECT_EQ(report->max_additive, 0);
  EXPECT_EQ(report->max_debiased_rel, 0);
  EXPECT_EQ(report->max_raw_rel, 0);
  EXPECT_EQ(report->additive_bound, 0);
}

TEST(MaxErrorReportTest, MeasuresAgainstPaddedTruth) {
  Rng rng(10);
  auto data = RandomDataset(rng, 40, 5, 0.5);
  WindowSynthConfig cfg;
  cfg.horizon = 5;
  cfg.k = 2;
  cfg.noiseless = true;
  cfg.n_pad_override = 3;
  auto synth = *WindowSynthesizer::Create(cfg);
  Rng run_rng(11);
  ASSERT_TRUE(synth.Run(data, run_rng).ok());
  // Padded counts are exactly C + n_pad, so the additive error is zero.
  auto padded = MaxErrorReport(data, synth.store(), {5, 2, PrivacyBudget::Zero(), 0.05, 3});
  ASSERT_TRUE(padded.ok());
  EXPECT_EQ(padded->max_additive, 0);
  EXPECT_GT(padded->max_raw_rel, 0);
  // Ignoring the padding shows it as error.
  auto unpadded = MaxErrorReport(data, synth.store(), {5, 2, PrivacyBudget::Zero(), 0.05, 0});
  EXPECT_EQ(unpadded->max_additive, 3);
  for (const RoundErrors& r : unpadded->rounds) {
    EXPECT_GE(r.max_additive, 0);
    EXPECT_GE(r.max_raw_rel, 0);
  }
}

TEST(MaxErrorReportTest, CarriesBounds) {
  Rng rng(12);
  auto data = RandomDataset(rng, 1000, 12, 0.5);
  WindowSynthConfig cfg;
  cfg.horizon = 12;
  cfg.k = 3;
  cfg.rho = *PrivacyBudget::Create(0.005);
  auto synth = *WindowSynthesizer::Create(cfg);
  Rng run_rng(13);
  if (!synth.Run(data, run_rng).ok()) GTEST_SKIP() << "padding ran out";
  auto report = MaxErrorReport(data, synth.store(),
                               {12, 3, cfg.rho, 0.05, synth.n_pad()});
  ASSERT_TRUE(report.ok());
  EXPECT_NEAR(report->additive_bound, *ComputeErrorBound(12, 3, cfg.rho, 0.05),
              1e-12);
  EXPECT_NEAR(report->debiased_rel_bound, report->additive_bound / 1000, 1e-15);
}

}  // namespace
}  // namespace longsynth
