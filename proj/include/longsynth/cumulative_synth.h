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

// Continual synthetic data preserving cumulative Hamming-weight thresholds
// S_b^t = #{i : x_i^1 + ... + x_i^t >= b} for every b at once.
//
// Threshold b has its own stream counter over
// z_b^t = #{i : weight up to t-1 is b-1 and x_i^t = 1}, whose prefix sums are
// S_b^t. Counter outputs go through a MonotoneBank so the released counts
// are non-decreasing in t and never exceed the previous round's count at
// threshold b-1. The synthetic population (m = n) is then extended so that
// exactly hat S_b^t - hat S_b^{t-1} records of weight b-1 gain a 1.

#ifndef LONGSYNTH_CUMULATIVE_SYNTH_H_
#define LONGSYNTH_CUMULATIVE_SYNTH_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "longsynth/core_model.h"
#include "longsynth/privacy.h"
#include "longsynth/rng.h"
#include "longsynth/stream_counter.h"

namespace longsynth {

struct CumulativeSynthConfig {
  int horizon = 0;  // T
  PrivacyBudget rho = PrivacyBudget::Zero();
  // rho_b for b = 1..T; SplitCumulative(rho, T) when unset.
  std::optional<BudgetSchedule> schedule;
  CounterKind counter_kind = CounterKind::kTree;
  bool noiseless = false;
};

// Accuracy of the tree-counter instantiation with the SplitCumulative
// schedule: every released fraction is within alpha of the truth with
// probability at least 1 - beta_star.
struct AccuracyGuarantee {
  double alpha = 0;
  double beta = 0;
};

// alpha = (1/n) sqrt(sum_b max(ceil(log2(T-b+1)), 1)^3 / rho * ln(1/beta)),
// beta_star = T beta.
absl::StatusOr<AccuracyGuarantee> AccuracyOf(const CumulativeSynthConfig& cfg,
                                             int64_t n, double beta);

class CumulativeSynthesizer {
 public:
  // Counter b runs over rounds b..T (its inputs are zero before), so it is
  // built with horizon T - b + 1 and budget rho_b.
  static absl::StatusOr<CumulativeSynthesizer> Create(
      int64_t population, const CumulativeSynthConfig& cfg);

  CumulativeSynthesizer(CumulativeSynthesizer&&) = default;
  CumulativeSynthesizer& operator=(CumulativeSynthesizer&&) = default;

  // Round t = round() + 1 <= T. Returns the released column.
  absl::StatusOr<std::span<const uint8_t>> Step(const BitPanel& data, int t,
                                                Rng& rng);
  absl::Status Run(const BitPanel& data, Rng& rng);

  const CumulativeSynthConfig& config() const { return cfg_; }
  const BudgetSchedule& schedule() const { return schedule_; }
  const MonotoneBank& bank() const { return bank_; }
  const SyntheticStore& store() const { return store_; }
  // Current Hamming weight of every synthetic record.
  const std::vector<int>& weights() const { return weights_; }
  const StreamCounter& counter(int b) const { return *counters_[b - 1]; }
  int round() const { return round_; }
  std::size_t m() const { return store_.m(); }

 private:
  CumulativeSynthesizer(CumulativeSynthConfig cfg, BudgetSchedule schedule,
                        int64_t population)
      : cfg_(std::move(cfg)),
        schedule_(std::move(schedule)),
        bank_(cfg_.horizon, population),
        store_(static_cast<std::size_t>(population)),
        weights_(static_cast<std::size_t>(population), 0) {}

  CumulativeSynthConfig cfg_;
  BudgetSchedule schedule_;
  MonotoneBank bank_;
  SyntheticStore store_;
  std::vector<int> weights_;
  // Hamming weights of the real individuals through round().
  std::vector<int> true_weights_;
  std::vector<std::unique_ptr<StreamCounter>> counters_;
  int round_ = 0;
};

}  // namespace longsynth

#endif  // LONGSYNTH_CUMULATIVE_SYNTH_H_
