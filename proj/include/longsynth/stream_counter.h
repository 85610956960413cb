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

#ifndef LONGSYNTH_STREAM_COUNTER_H_
#define LONGSYNTH_STREAM_COUNTER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "longsynth/privacy.h"
#include "longsynth/rng.h"

namespace longsynth {

// Continual-release counter over a stream of naturals z^1..z^T. Neighbouring
// streams differ in one entry by at most 1. Implementations release a noisy
// prefix sum after every feed.
class StreamCounter {
 public:
  virtual ~StreamCounter() = default;

  // Consumes z^t for the next t and returns the noisy prefix sum.
  virtual absl::StatusOr<int64_t> Feed(int64_t z, Rng& rng) = 0;

  virtual int horizon() const = 0;
  // Number of values fed so far.
  virtual int time() const = 0;
  virtual std::string kind() const = 0;
};

// Binary-tree aggregation. Register j holds the sum of a dyadic block of
// 2^j consecutive inputs; the prefix sum at t adds the noisy registers for
// the set bits of t. Every input lands in at most ceil(log2 T) + 1 nodes.
class TreeCounter : public StreamCounter {
 public:
  // Per-node sigma^2 = ln(max(T, 2)) / (2 rho). rho must be positive.
  static absl::StatusOr<TreeCounter> Create(int horizon, PrivacyBudget rho);
  // Exact prefix sums, no noise.
  static absl::StatusOr<TreeCounter> Noiseless(int horizon);

  absl::StatusOr<int64_t> Feed(int64_t z, Rng& rng) override;
  int horizon() const override { return horizon_; }
  int time() const override { return time_; }
  std::string kind() const override { return "tree"; }

  const NoiseScale& noise() const { return noise_; }
  const std::vector<int64_t>& registers() const { return exact_; }
  const std::vector<int64_t>& noisy_registers() const { return noisy_; }

 private:
  TreeCounter(int horizon, NoiseScale noise);

  int horizon_;
  int time_ = 0;
  NoiseScale noise_;
  std::vector<int64_t> exact_;
  std::vector<int64_t> noisy_;
};

enum class CounterKind { kTree };

absl::StatusOr<CounterKind> ParseCounterKind(const std::string& name);
std::string CounterKindName(CounterKind kind);

// Factory behind the generic interface.
absl::StatusOr<std::unique_ptr<StreamCounter>> MakeCounter(CounterKind kind,
                                                           int horizon,
                                                           PrivacyBudget rho,
                                                           bool noiseless);

// Monotonised threshold counts hat S_b^t for b, t in [0, T].
//
// Row b = 0 is the public population size; cells with b > t are zero. The
// remaining cells are filled in round order by Monotonize, which clamps a
// noisy value into [hat S_b^{t-1}, hat S_{b-1}^{t-1}].
class MonotoneBank {
 public:
  MonotoneBank(int horizon, int64_t population);

  int horizon() const { return horizon_; }
  int64_t population() const { return population_; }

  absl::StatusOr<int64_t> Monotonize(int b, int t, int64_t noisy);

  // hat S_b^t, if already determined.
  std::optional<int64_t> value(int b, int t) const;
  // The raw counter output recorded by Monotonize, if any.
  std::optional<int64_t> noisy(int b, int t) const;

 private:
  std::size_t index(int b, int t) const {
    return static_cast<std::size_t>(b) * (horizon_ + 1) + t;
  }

  int horizon_;
  int64_t population_;
  std::vector<int64_t> hat_;
  std::vector<int64_t> noisy_;
};

}  // namespace longsynth

#endif  // LONGSYNTH_STREAM_COUNTER_H_
