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


#include "longsynth/stream_counter.h"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <map>
#include <tuple>

#include "longsynth/privacy.h"

namespace longsynth {
namespace {

PrivacyBudget Rho(double rho) { return *PrivacyBudget::Create(rho); }

TEST(TreeCounterTest, NoiseScaleFromBudget) {
  auto counter = TreeCounter::Create(8, Rho(0.5));
  ASSERT_TRUE(counter.ok());
  // ln(8) / (2 * 0.5), rounded up onto the sampler's grid.
  EXPECT_NEAR(counter->noise().value(), 2.0794, 1e-4);
  EXPECT_GE(counter->noise().value(), std::log(8.0));
}

TEST(TreeCounterTest, SingleStepCounterStillNoisy) {
  auto counter = TreeCounter::Create(1, Rho(0.5));
  ASSERT_TRUE(counter.ok());
  EXPECT_FALSE(counter->noise().is_zero());
  EXPECT_GE(counter->noise().value(), std::log(2.0));
}

TEST(TreeCounterTest, RegisterCount) {
  for (int horizon : {1, 2, 3, 4, 5, 8, 12, 16, 17}) {
    auto counter = TreeCounter::Noiseless(horizon);
    ASSERT_TRUE(counter.ok());
    EXPECT_EQ(static_cast<int>(counter->registers().size()),
              CeilLog2(horizon) + 1)
        << horizon;
  }
}

TEST(TreeCounterTest, Errors) {
  EXPECT_FALSE(TreeCounter::Create(0, Rho(1)).ok());
  EXPECT_FALSE(TreeCounter::Create(4, PrivacyBudget::Zero()).ok());
  EXPECT_FALSE(TreeCounter::Noiseless(0).ok());
  auto counter = *TreeCounter::Noiseless(2);
  Rng rng(1);
  EXPECT_FALSE(counter.Feed(-1, rng).ok());
  ASSERT_TRUE(counter.Feed(1, rng).ok());
  ASSERT_TRUE(counter.Feed(1, rng).ok());
  EXPECT_EQ(counter.Feed(1, rng).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(TreeCounterTest, NoiselessPrefixSums) {
  auto counter = *TreeCounter::Noiseless(3);
  Rng rng(1);
  EXPECT_EQ(*counter.Feed(1, rng), 1);
  EXPECT_EQ(*counter.Feed(2, rng), 3);
  EXPECT_EQ(*counter.Feed(3, rng), 6);
  EXPECT_EQ(counter.time(), 3);
}

TEST(TreeCounterTest, RoundThreeSumsTwoRegisters) {
  auto counter = *TreeCounter::Create(8, Rho(0.5));
  Rng rng(2);
  ASSERT_TRUE(counter.Feed(4, rng).ok());
  ASSERT_TRUE(counter.Feed(5, rng).ok());
  auto out = counter.Feed(6, rng);
  ASSERT_TRUE(out.ok());
  // t = 3 = 0b11: register 0 holds z^3, register 1 holds z^1 + z^2.
  EXPECT_EQ(counter.registers()[0], 6);
  EXPECT_EQ(counter.registers()[1], 9);
  EXPECT_EQ(*out, counter.noisy_registers()[0] + counter.noisy_registers()[1]);
}

TEST(TreeCounterTest, RoundFourIsOneFreshRegister) {
  auto counter = *TreeCounter::Create(8, Rho(0.5));
  Rng rng(3);
  for (int64_t z : {4, 5, 6}) ASSERT_TRUE(counter.Feed(z, rng).ok());
  auto out = counter.Feed(7, rng);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(counter.registers()[0], 0);
  EXPECT_EQ(counter.registers()[1], 0);
  EXPECT_EQ(counter.registers()[2], 4 + 5 + 6 + 7);
  EXPECT_EQ(*out, counter.noisy_registers()[2]);
}

TEST(TreeCounterTest, RoundThreeErrorVarianceIsTwoSigma2) {
  constexpr int kRuns = 20000;
  double sq = 0;
  double sigma2 = 0;
  for (int run = 0; run < kRuns; ++run) {
    auto counter = *TreeCounter::Create(8, Rho(0.05));
    sigma2 = counter.noise().value();
    Rng rng(DeriveSeed(77, run));
    int64_t out = 0;
    for (int64_t z : {1, 0, 1}) out = *counter.Feed(z, rng);
    sq += static_cast<double>((out - 2) * (out - 2));
  }
  // Relative standard error of the variance estimate is sqrt(2 / kRuns) ~ 1%.
  EXPECT_NEAR(sq / kRuns / (2 * sigma2), 1.0, 0.05);
}

TEST(TreeCounterTest, ErrorTailMatchesLogDepth) {
  constexpr int kRuns = 10000;
  constexpr int kHorizon = 16;
  int exceed = 0;
  int pairs = 0;
  for (int run = 0; run < kRuns; ++run) {
    auto counter = *TreeCounter::Create(kHorizon, Rho(0.1));
    const double sigma2 = counter.noise().value();
    Rng rng(DeriveSeed(78, run));
    int64_t truth = 0;
    for (int t = 1; t <= kHorizon; ++t) {
      const int64_t z = static_cast<int64_t>(rng.Uniform(uint64_t{3}));
      truth += z;
      const int64_t out = *counter.Feed(z, rng);
      const double limit = 6 * std::sqrt(sigma2 * std::max(CeilLog2(t), 1));
      exceed += std::fabs(static_cast<double>(out - truth)) > limit;
      ++pairs;
    }
  }
  EXPECT_LT(static_cast<double>(exceed) / pairs, 0.001);
}

// One changed input moves only the dyadic blocks that contain it.
TEST(TreeCounterTest, NeighbouringStreamsTouchFewRegisters) {
  Rng data_rng(4);
  for (int horizon : {1, 5, 8, 12, 16, 31}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int64_t> stream(horizon);
      for (auto& z : stream) z = static_cast<int64_t>(data_rng.Uniform(uint64_t{4}));
      std::vector<int64_t> neighbour = stream;
      const auto changed = data_rng.Uniform(static_cast<uint64_t>(horizon));
      neighbour[changed] += 1;

      // Every register write, keyed by (level, time of write).
      auto trace = [&](const std::vector<int64_t>& zs) {
        std::map<std::pair<int, int>, int64_t> writes;
        auto counter = *TreeCounter::Noiseless(horizon);
        Rng rng(0);
        for (int t = 1; t <= horizon; ++t) {
          EXPECT_TRUE(counter.Feed(zs[t - 1], rng).ok());
          const int level = std::countr_zero(static_cast<unsigned>(t));
          writes[{level, t}] = counter.registers()[level];
        }
        return writes;
      };
      const auto a = trace(stream);
      const auto b = trace(neighbour);
      int differing = 0;
      for (const auto& [key, value] : a) differing += value != b.at(key);
      EXPECT_LE(differing, CeilLog2(horizon) + 1);
      EXPECT_GE(differing, 1);
    }
  }
}

TEST(MakeCounterTest, BuildsTree) {
  auto counter = MakeCounter(CounterKind::kTree, 4, Rho(1), false);
  ASSERT_TRUE(counter.ok());
  EXPECT_EQ((*counter)->kind(), "tree");
  EXPECT_EQ((*counter)->horizon(), 4);
  EXPECT_TRUE(ParseCounterKind("tree").ok());
  EXPECT_FALSE(ParseCounterKind("matrix").ok());
}

TEST(MonotoneBankTest, Seeds) {
  MonotoneBank bank(3, 5);
  for (int t = 0; t <= 3; ++t) EXPECT_EQ(bank.value(0, t), 5);
  for (int b = 1; b <= 3; ++b) EXPECT_EQ(bank.value(b, 0), 0);
  EXPECT_EQ(bank.value(3, 2), 0);
  EXPECT_FALSE(bank.value(1, 1).has_value());
}

// Builds a bank where hat S_b^{t-1} = lower and hat S_{b-1}^{t-1} = upper
// for (b, t) = (1, 2), then clamps `noisy`.
int64_t ClampInFreshBank(int64_t lower, int64_t upper, int64_t noisy) {
  MonotoneBank bank(2, upper);
  EXPECT_TRUE(bank.Monotonize(1, 1, lower).ok());
  return *bank.Monotonize(1, 2, noisy);
}

TEST(MonotoneBankTest, ClampExamples) {
  EXPECT_EQ(ClampInFreshBank(6, 10, 5), 6);
  EXPECT_EQ(ClampInFreshBank(6, 10, 12), 10);
  EXPECT_EQ(ClampInFreshBank(6, 10, 7), 7);
}

TEST(MonotoneBankTest, RecordsNoisyValue) {
  MonotoneBank bank(2, 10);
  ASSERT_TRUE(bank.Monotonize(1, 1, 14).ok());
  EXPECT_EQ(bank.value(1, 1), 10);
  EXPECT_EQ(bank.noisy(1, 1), 14);
}

TEST(MonotoneBankTest, Errors) {
  MonotoneBank bank(3, 10);
  EXPECT_EQ(bank.Monotonize(0, 1, 1).status().code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_EQ(bank.Monotonize(1, 4, 1).status().code(),
            absl::StatusCode::kOutOfRange);
  // (1, 2) needs (1, 1) first.
  EXPECT_EQ(bank.Monotonize(1, 2, 1).status().code(),
            absl::StatusCode::kFailedPrecondition);
  ASSERT_TRUE(bank.Monotonize(1, 1, 3).ok());
  EXPECT_EQ(bank.Monotonize(1, 1, 3).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(MonotoneBankTest, InvariantsUnderRandomInput) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int horizon = 1 + static_cast<int>(rng.Uniform(uint64_t{10}));
    const int64_t m = static_cast<int64_t>(rng.Uniform(uint64_t{50}));
    MonotoneBank bank(horizon, m);
    for (int t = 1; t <= horizon; ++t) {
      for (int b = 1; b <= t; ++b) {
        const int64_t noisy =
            static_cast<int64_t>(rng.Uniform(uint64_t{120})) - 30;
        ASSERT_TRUE(bank.Monotonize(b, t, noisy).ok());
        EXPECT_LE(*bank.value(b, t - 1), *bank.value(b, t));
        EXPECT_LE(*bank.value(b, t), *bank.value(b - 1, t - 1));
      }
    }
  }
}

}  // namespace
}  // namespace longsynth
