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

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "longsynth/discrete_gaussian.h"

namespace longsynth {
namespace {

constexpr int64_t kUnset = std::numeric_limits<int64_t>::min();

}  // namespace

TreeCounter::TreeCounter(int horizon, NoiseScale noise)
    : horizon_(horizon),
      noise_(noise),
      exact_(CeilLog2(horizon) + 1, 0),
      noisy_(CeilLog2(horizon) + 1, 0) {}

absl::StatusOr<TreeCounter> TreeCounter::Create(int horizon,
                                                PrivacyBudget rho) {
  if (horizon < 1) return absl::InvalidArgumentError("horizon must be >= 1");
  if (rho.rho() <= 0) {
    return absl::InvalidArgumentError(
        "tree counter needs a positive budget; use Noiseless() for exact sums");
  }
  // A one-step counter still releases one noisy node.
  const double sigma2 =
      std::log(static_cast<double>(std::max(horizon, 2))) / (2.0 * rho.rho());
  auto noise = NoiseScale::AtLeast(sigma2);
  if (!noise.ok()) return noise.status();
  return TreeCounter(horizon, *noise);
}

absl::StatusOr<TreeCounter> TreeCounter::Noiseless(int horizon) {
  if (horizon < 1) return absl::InvalidArgumentError("horizon must be >= 1");
  return TreeCounter(horizon, NoiseScale::Zero());
}

absl::StatusOr<int64_t> TreeCounter::Feed(int64_t z, Rng& rng) {
  if (time_ >= horizon_) {
    return absl::FailedPreconditionError(
        absl::StrCat("counter already consumed its horizon of ", horizon_));
  }
  if (z < 0) {
    return absl::InvalidArgumentError(absl::StrCat("negative input ", z));
  }
  const int t = ++time_;
  const int lowest = std::countr_zero(static_cast<unsigned>(t));
  int64_t block = z;
  for (int j = 0; j < lowest; ++j) {
    block += exact_[j];
    exact_[j] = 0;
    noisy_[j] = 0;
  }
  exact_[lowest] = block;
  noisy_[lowest] = block + SampleDiscreteGaussian(noise_, rng);

  int64_t sum = 0;
  for (int j = 0; j < static_cast<int>(noisy_.size()); ++j) {
    if ((t >> j) & 1) sum += noisy_[j];
  }
  return sum;
}

absl::StatusOr<CounterKind> ParseCounterKind(const std::string& name) {
  if (name == "tree") return CounterKind::kTree;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown counter kind '", name, "'"));
}

std::string CounterKindName(CounterKind kind) {
  switch (kind) {
    case CounterKind::kTree:
      return "tree";
  }
  return "unknown";
}

absl::StatusOr<std::unique_ptr<StreamCounter>> MakeCounter(CounterKind kind,
                                                           int horizon,
                                                           PrivacyBudget rho,
                                                           bool noiseless) {
  switch (kind) {
    case CounterKind::kTree: {
      auto counter = noiseless ? TreeCounter::Noiseless(horizon)
                               : TreeCounter::Create(horizon, rho);
      if (!counter.ok()) return counter.status();
      return std::make_unique<TreeCounter>(*std::move(counter));
    }
  }
  return absl::InvalidArgumentError("unknown counter kind");
}

MonotoneBank::MonotoneBank(int horizon, int64_t population)
    : horizon_(horizon),
      population_(population),
      hat_((horizon + 1) * (horizon + 1), kUnset),
      noisy_((horizon + 1) * (horizon + 1), kUnset) {
  for (int b = 0; b <= horizon; ++b) {
    for (int t = 0; t <= horizon; ++t) {
      if (b == 0) {
        hat_[index(b, t)] = population;
      } else if (b > t) {
        hat_[index(b, t)] = 0;
      }
    }
  }
}

absl::StatusOr<int64_t> MonotoneBank::Monotonize(int b, int t, int64_t noisy) {
  if (b < 1 || t < 1 || b > horizon_ || t > horizon_) {
    return absl::OutOfRangeError(
        absl::StrCat("cell (b=", b, ", t=", t, ") outside the bank"));
  }
  const int64_t lower = hat_[index(b, t - 1)];
  const int64_t upper = hat_[index(b - 1, t - 1)];
  if (lower == kUnset || upper == kUnset) {
    return absl::FailedPreconditionError(absl::StrCat(
        "predecessors of (b=", b, ", t=", t, ") are not determined"));
  }
  if (hat_[index(b, t)] != kUnset) {
    return absl::FailedPreconditionError(
        absl::StrCat("cell (b=", b, ", t=", t, ") already released"));
  }
  const int64_t clamped = std::min(std::max(noisy, lower), upper);
  hat_[index(b, t)] = clamped;
  noisy_[index(b, t)] = noisy;
  return clamped;
}

std::optional<int64_t> MonotoneBank::value(int b, int t) const {
  if (b < 0 || t < 0 || b > horizon_ || t > horizon_) return std::nullopt;
  const int64_t v = hat_[index(b, t)];
  if (v == kUnset) return std::nullopt;
  return v;
}

std::optional<int64_t> MonotoneBank::noisy(int b, int t) const {
  if (b < 0 || t < 0 || b > horizon_ || t > horizon_) return std::nullopt;
  const int64_t v = noisy_[index(b, t)];
  if (v == kUnset) return std::nullopt;
  return v;
}

}  // namespace longsynth
