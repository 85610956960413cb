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


#include "longsynth/cumulative_synth.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "test_util.h"

namespace longsynth {
namespace {

using ::longsynth::testing::CountAtLeast;
using ::longsynth::testing::RandomDataset;
using ::longsynth::testing::RandomRows;
using ::longsynth::testing::RowsOf;

PrivacyBudget Rho(double rho) { return *PrivacyBudget::Create(rho); }

CumulativeSynthConfig Config(int horizon, double rho, bool noiseless = false) {
  CumulativeSynthConfig cfg;
  cfg.horizon = horizon;
  cfg.rho = Rho(rho);
  cfg.noiseless = noiseless;
  return cfg;
}

TEST(CumulativeSynthesizerTest, Construction) {
  auto synth = CumulativeSynthesizer::Create(5, Config(3, 0.3));
  ASSERT_TRUE(synth.ok());
  EXPECT_EQ(synth->m(), 5u);
  EXPECT_EQ(synth->round(), 0);
  for (int t = 0; t <= 3; ++t) EXPECT_EQ(synth->bank().value(0, t), 5);
  for (int b = 1; b <= 3; ++b) {
    EXPECT_EQ(synth->bank().value(b, 0), 0);
    EXPECT_EQ(synth->counter(b).horizon(), 3 - b + 1);
  }
  EXPECT_NEAR(synth->schedule().Total().rho(), 0.3, 1e-12);
  EXPECT_EQ(synth->weights(), std::vector<int>(5, 0));
}

TEST(CumulativeSynthesizerTest, CreateErrors) {
  EXPECT_FALSE(CumulativeSynthesizer::Create(0, Config(3, 0.3)).ok());
  EXPECT_FALSE(CumulativeSynthesizer::Create(5, Config(0, 0.3)).ok());
  EXPECT_FALSE(CumulativeSynthesizer::Create(5, Config(3, 0)).ok());
  CumulativeSynthConfig wrong_sum = Config(2, 0.3);
  wrong_sum.schedule = *BudgetSchedule::FromShares({0.1, 0.1});
  EXPECT_FALSE(CumulativeSynthesizer::Create(5, wrong_sum).ok());
  CumulativeSynthConfig wrong_size = Config(2, 0.3);
  wrong_size.schedule = *BudgetSchedule::FromShares({0.3});
  EXPECT_FALSE(CumulativeSynthesizer::Create(5, wrong_size).ok());
  CumulativeSynthConfig custom = Config(2, 0.3);
  custom.schedule = *BudgetSchedule::FromShares({0.2, 0.1});
  EXPECT_TRUE(CumulativeSynthesizer::Create(5, custom).ok());
}

TEST(CumulativeSynthesizerTest, NoiselessSmallExample) {
  auto data = *LongitudinalDataset::FromRows({{1, 1, 0}, {0, 1, 1}, {0, 0, 0}});
  auto synth = *CumulativeSynthesizer::Create(3, Config(3, 1, true));
  Rng rng(1);
  ASSERT_TRUE(synth.Run(data, rng).ok());
  std::vector<int> weights = synth.weights();
  std::sort(weights.begin(), weights.end());
  EXPECT_EQ(weights, (std::vector<int>{0, 2, 2}));
  EXPECT_EQ(synth.bank().value(1, 3), 2);
  EXPECT_EQ(synth.bank().value(2, 3), 2);
  EXPECT_EQ(synth.bank().value(3, 3), 0);
}

TEST(CumulativeSynthesizerTest, NoiselessAllZero) {
  std::vector<std::vector<uint8_t>> rows(6, std::vector<uint8_t>(5, 0));
  auto data = *LongitudinalDataset::FromRows(rows);
  auto synth = *CumulativeSynthesizer::Create(6, Config(5, 1, true));
  Rng rng(2);
  ASSERT_TRUE(synth.Run(data, rng).ok());
  for (int t = 1; t <= 5; ++t) {
    for (int b = 1; b <= 5; ++b) EXPECT_EQ(synth.bank().value(b, t), 0);
    for (uint8_t bit : synth.store().column(t)) EXPECT_EQ(bit, 0);
  }
}

TEST(CumulativeSynthesizerTest, NoiselessMatchesTruth) {
  Rng data_rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + data_rng.Uniform(uint64_t{30});
    const int horizon = 1 + static_cast<int>(data_rng.Uniform(uint64_t{8}));
    auto rows = RandomRows(data_rng, n, horizon, 0.5);
    auto data = *LongitudinalDataset::FromRows(rows);
    auto synth = *CumulativeSynthesizer::Create(static_cast<int64_t>(n),
                                                Config(horizon, 1, true));
    Rng rng(trial);
    ASSERT_TRUE(synth.Run(data, rng).ok());
    const auto synth_rows = RowsOf(synth.store());
    for (int t = 1; t <= horizon; ++t) {
      for (int b = 1; b <= t; ++b) {
        EXPECT_EQ(CountAtLeast(synth_rows, b, t), CountAtLeast(rows, b, t));
      }
    }
  }
}

TEST(CumulativeSynthesizerTest, StoreRealizesBankUnderNoise) {
  Rng data_rng(4);
  auto rows = RandomRows(data_rng, 200, 10, 0.3);
  auto data = *LongitudinalDataset::FromRows(rows);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    auto synth = *CumulativeSynthesizer::Create(200, Config(10, 0.05));
    Rng rng(seed);
    for (int t = 1; t <= 10; ++t) {
      ASSERT_TRUE(synth.Step(data, t, rng).ok());
      const auto synth_rows = RowsOf(synth.store());
      for (int b = 1; b <= t; ++b) {
        EXPECT_EQ(CountAtLeast(synth_rows, b, t), *synth.bank().value(b, t));
        EXPECT_LE(*synth.bank().value(b, t - 1), *synth.bank().value(b, t));
        EXPECT_LE(*synth.bank().value(b, t), *synth.bank().value(b - 1, t - 1));
      }
      // Cached weights agree with column sums.
      for (std::size_t i = 0; i < synth.m(); ++i) {
        int weight = 0;
        for (int j = 1; j <= t; ++j) weight += synth.store().bit(i, j);
        EXPECT_EQ(synth.weights()[i], weight);
      }
    }
  }
}

TEST(CumulativeSynthesizerTest, MonotonizationDoesNotExpandError) {
  Rng data_rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + data_rng.Uniform(uint64_t{20});
    const int horizon = 1 + static_cast<int>(data_rng.Uniform(uint64_t{8}));
    auto data = RandomDataset(data_rng, n, horizon, 0.5);
    auto synth = *CumulativeSynthesizer::Create(static_cast<int64_t>(n),
                                                Config(horizon, 0.5));
    Rng rng(trial);
    ASSERT_TRUE(synth.Run(data, rng).ok());
    int64_t hat_error = 0, raw_error = 0;
    for (int t = 1; t <= horizon; ++t) {
      const auto truth = *TrueCumulativeCounts(data, t);
      for (int b = 1; b <= t; ++b) {
        hat_error = std::max(hat_error,
                             std::abs(*synth.bank().value(b, t) - truth[b]));
        raw_error = std::max(raw_error,
                             std::abs(*synth.bank().noisy(b, t) - truth[b]));
      }
    }
    EXPECT_LE(hat_error, raw_error);
  }
}

TEST(CumulativeSynthesizerTest, StepErrors) {
  Rng data_rng(6);
  auto data = RandomDataset(data_rng, 10, 3, 0.5);
  auto synth = *CumulativeSynthesizer::Create(10, Config(3, 1));
  Rng rng(1);
  EXPECT_EQ(synth.Step(data, 2, rng).status().code(),
            absl::StatusCode::kFailedPrecondition);
  auto other = RandomDataset(data_rng, 9, 3, 0.5);
  EXPECT_EQ(synth.Step(other, 1, rng).status().code(),
            absl::StatusCode::kInvalidArgument);
  ASSERT_TRUE(synth.Run(data, rng).ok());
  EXPECT_EQ(synth.Step(data, 4, rng).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST(CumulativeSynthesizerTest, DeterministicForSeed) {
  Rng data_rng(7);
  auto data = RandomDataset(data_rng, 100, 8, 0.4);
  auto run = [&](uint64_t seed) {
    auto synth = *CumulativeSynthesizer::Create(100, Config(8, 0.1));
    Rng rng(seed);
    EXPECT_TRUE(synth.Run(data, rng).ok());
    return synth.store();
  };
  EXPECT_EQ(run(3), run(3));
}

TEST(AccuracyOfTest, SingleRound) {
  const double beta = 0.05, rho = 0.2;
  const int64_t n = 1000;
  auto acc = AccuracyOf(Config(1, rho), n, beta);
  ASSERT_TRUE(acc.ok());
  EXPECT_NEAR(acc->alpha, std::sqrt(std::log(1 / beta) / rho) / n, 1e-15);
  EXPECT_DOUBLE_EQ(acc->beta, beta);
}

TEST(AccuracyOfTest, TwelveRounds) {
  // Depths for b = 1..12 are ceil(log2(13 - b)) floored at 1:
  // 4,4,4,4,3,3,3,3,2,2,1,1, so the weights sum to 4*64 + 4*27 + 2*8 + 2.
  const double total = 4 * 64 + 4 * 27 + 2 * 8 + 2;
  auto acc = AccuracyOf(Config(12, 0.005), 23374, 0.05);
  ASSERT_TRUE(acc.ok());
  EXPECT_NEAR(acc->alpha,
              std::sqrt(total / 0.005 * std::log(20.0)) / 23374, 1e-15);
  EXPECT_NEAR(acc->beta, 12 * 0.05, 1e-15);
}

TEST(AccuracyOfTest, Shape) {
  const double a = AccuracyOf(Config(12, 0.01), 1000, 0.05)->alpha;
  EXPECT_LT(AccuracyOf(Config(12, 0.01), 2000, 0.05)->alpha, a);
  EXPECT_LT(AccuracyOf(Config(12, 0.02), 1000, 0.05)->alpha, a);
  EXPECT_FALSE(AccuracyOf(Config(12, 0.01), 1000, 0).ok());
}

}  // namespace
}  // namespace longsynth
