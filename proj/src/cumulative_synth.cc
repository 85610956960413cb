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

#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"

namespace longsynth {

absl::StatusOr<AccuracyGuarantee> AccuracyOf(const CumulativeSynthConfig& cfg,
                                             int64_t n, double beta) {
  if (!(beta > 0 && beta < 1)) {
    return absl::InvalidArgumentError("beta must lie in (0, 1)");
  }
  if (n <= 0) return absl::InvalidArgumentError("n must be positive");
  if (cfg.horizon < 1) return absl::InvalidArgumentError("horizon must be >= 1");
  if (cfg.rho.rho() <= 0) {
    return absl::InvalidArgumentError("accuracy needs a positive rho");
  }
  double total = 0;
  for (int b = 1; b <= cfg.horizon; ++b) {
    total += static_cast<double>(CumulativeWeight(cfg.horizon, b));
  }
  AccuracyGuarantee out;
  out.alpha = std::sqrt(total / cfg.rho.rho() * std::log(1.0 / beta)) /
              static_cast<double>(n);
  out.beta = cfg.horizon * beta;
  return out;
}

absl::StatusOr<CumulativeSynthesizer> CumulativeSynthesizer::Create(
    int64_t population, const CumulativeSynthConfig& cfg) {
  if (population < 1) {
    return absl::InvalidArgumentError("population must be at least 1");
  }
  if (cfg.horizon < 1) return absl::InvalidArgumentError("horizon must be >= 1");

  BudgetSchedule schedule;
  if (cfg.schedule) {
    schedule = *cfg.schedule;
  } else {
    auto split = SplitCumulative(cfg.rho, cfg.horizon);
    if (!split.ok()) return split.status();
    schedule = *std::move(split);
  }
  if (schedule.size() != static_cast<std::size_t>(cfg.horizon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("schedule has ", schedule.size(), " entries for horizon ",
                     cfg.horizon));
  }
  const double total = schedule.Total().rho();
  if (std::fabs(total - cfg.rho.rho()) > 1e-9 * std::max(cfg.rho.rho(), 1e-300)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "schedule sums to ", total, " but rho is ", cfg.rho.rho()));
  }

  CumulativeSynthesizer synth(cfg, schedule, population);
  synth.true_weights_.assign(static_cast<std::size_t>(population), 0);
  for (int b = 1; b <= cfg.horizon; ++b) {
    auto counter = MakeCounter(cfg.counter_kind, cfg.horizon - b + 1,
                               schedule.at(b - 1), cfg.noiseless);
    if (!counter.ok()) return counter.status();
    synth.counters_.push_back(*std::move(counter));
  }
  return synth;
}

absl::StatusOr<std::span<const uint8_t>> CumulativeSynthesizer::Step(
    const BitPanel& data, int t, Rng& rng) {
  if (t != round_ + 1) {
    return absl::FailedPreconditionError(
        absl::StrCat("out-of-order round ", t, "; expected ", round_ + 1));
  }
  if (t > cfg_.horizon) {
    return absl::OutOfRangeError(
        absl::StrCat("round ", t, " is past the horizon ", cfg_.horizon));
  }
  if (data.population() != store_.m()) {
    return absl::InvalidArgumentError(
        absl::StrCat("data has ", data.population(),
                     " individuals; synthesizer was built for ", store_.m()));
  }
  if (data.rounds() < t) {
    return absl::OutOfRangeError(
        absl::StrCat("data has no round ", t));
  }

  // z_b^t for b = 1..t, indexed by b.
  std::vector<int64_t> increments(t + 1, 0);
  auto truth = data.column(t);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i]) ++increments[true_weights_[i] + 1];
  }

  for (int b = 1; b <= t; ++b) {
    auto noisy = counters_[b - 1]->Feed(increments[b], rng);
    if (!noisy.ok()) return noisy.status();
    if (auto hat = bank_.Monotonize(b, t, *noisy); !hat.ok()) {
      return hat.status();
    }
  }

  // Pools by current synthetic weight, in index order.
  std::vector<std::vector<uint32_t>> pools(t);
  for (uint32_t i = 0; i < weights_.size(); ++i) {
    pools[weights_[i]].push_back(i);
  }
  std::vector<uint8_t> column(weights_.size(), 0);
  for (int b = 1; b <= t; ++b) {
    const int64_t gain = *bank_.value(b, t) - *bank_.value(b, t - 1);
    auto& pool = pools[b - 1];
    if (gain < 0 || gain > static_cast<int64_t>(pool.size())) {
      return absl::InternalError(absl::StrCat(
          "cannot extend ", gain, " of ", pool.size(),
          " records at b=", b, " t=", t));
    }
    rng.SelectPrefix(std::span<uint32_t>(pool), static_cast<std::size_t>(gain));
    for (int64_t j = 0; j < gain; ++j) column[pool[j]] = 1;
  }

  for (std::size_t i = 0; i < weights_.size(); ++i) {
    weights_[i] += column[i];
    true_weights_[i] += truth[i];
  }
  if (absl::Status s = store_.Append(std::move(column)); !s.ok()) return s;
  round_ = t;
  return store_.column(t);
}

absl::Status CumulativeSynthesizer::Run(const BitPanel& data, Rng& rng) {
  for (int t = round_ + 1; t <= cfg_.horizon; ++t) {
    if (auto column = Step(data, t, rng); !column.ok()) return column.status();
  }
  return absl::OkStatus();
}

}  // namespace longsynth
