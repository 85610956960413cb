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

// Continual synthetic data preserving every k-bit suffix histogram.
//
// Each round t = k..T the true suffix histogram C^t is released through
// per-bin discrete Gaussian noise on top of n_pad padding records, giving
// hat C^t. Round k seeds the synthetic population directly from hat C^k.
// Later rounds project hat C^t onto counts p^t that the existing synthetic
// records can realise: for every overlap z of length k-1,
//
//   p^t_{z0} + p^t_{z1} = p^{t-1}_{0z} + p^{t-1}_{1z},
//
// with the gap split evenly between the two bins and a fair coin breaking
// half-integer ties. Records whose last k-1 bits equal z are then extended,
// p^t_{z1} of them (chosen uniformly) by 1 and the rest by 0.

#ifndef LONGSYNTH_WINDOW_SYNTH_H_
#define LONGSYNTH_WINDOW_SYNTH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "longsynth/core_model.h"
#include "longsynth/privacy.h"
#include "longsynth/rng.h"

namespace longsynth {

struct WindowSynthConfig {
  int horizon = 0;  // T
  int k = 1;
  PrivacyBudget rho = PrivacyBudget::Zero();
  double beta_target = 0.05;
  // Replaces the computed padding when set.
  std::optional<int64_t> n_pad_override;
  // Skip noise entirely. Padding defaults to 0 unless overridden.
  bool noiseless = false;
};

// ceil(sqrt((T-k+1)/rho * ln(2^k (T-k+1) / beta_target))).
absl::StatusOr<int64_t> ComputeNPad(int horizon, int k, PrivacyBudget rho,
                                    double beta_target);

// Additive error bound on max_{s,t} |p_s^t - (C_s^t + n_pad)| holding with
// probability 1 - beta:
//   (sqrt((T-k+1)/rho) + 1/sqrt(2)) * sqrt(ln(2^k (T-k+1) / beta)).
absl::StatusOr<double> ComputeErrorBound(int horizon, int k, PrivacyBudget rho,
                                         double beta);

// Relative error bound against C_s^t / n: (2 lambda + 2^{k+1} lambda c) / n
// where lambda is ComputeErrorBound and c = C_s^t / n.
absl::StatusOr<double> ComputeRelativeErrorBound(int horizon, int k,
                                                 PrivacyBudget rho, double beta,
                                                 int64_t n, double c_frac);

// The consistency projection for one overlap z: given the pool size
// p^{t-1}_{0z} + p^{t-1}_{1z} and the noisy counts hat C_{z0}, hat C_{z1},
// returns (p^t_{z0}, p^t_{z1}) summing to the pool. When the gap is odd,
// `sign` (+1 or -1) breaks the tie toward z0 or z1 respectively; it is
// ignored otherwise.
std::pair<int64_t, int64_t> ProjectOverlap(int64_t pool, int64_t noisy_zero,
                                           int64_t noisy_one, int sign);

// Where a run ran out of padding.
struct PaddingFailure {
  int t = 0;
  // The overlap z (length k-1) at t > k, or the full bin s at t = k.
  std::string key;
  int64_t value = 0;
};

class WindowSynthesizer {
 public:
  static absl::StatusOr<WindowSynthesizer> Create(const WindowSynthConfig& cfg);

  const WindowSynthConfig& config() const { return cfg_; }
  int64_t n_pad() const { return n_pad_; }
  const NoiseScale& noise() const { return noise_; }
  // rho / (T - k + 1).
  double per_step_rho() const;

  // Round k: releases D^1..D^k of the synthetic population. Fails with
  // ResourceExhausted if any noisy bin is negative.
  absl::Status Initialize(const BitPanel& data, Rng& rng);

  // Round t = round() + 1 > k. Returns the released column. Fails with
  // ResourceExhausted if a projected count is negative; the run is then
  // over and failure() reports where.
  absl::StatusOr<std::span<const uint8_t>> Step(const BitPanel& data, int t,
                                                Rng& rng);

  // Initialize followed by Steps through the horizon.
  absl::Status Run(const BitPanel& data, Rng& rng);

  // Last released round, 0 before Initialize.
  int round() const { return round_; }
  const SyntheticStore& store() const { return store_; }
  std::size_t m() const { return store_.m(); }
  // p^t for the last released round.
  const SuffixHistogram& current() const { return history_.back(); }
  // p^t and hat C^t for t = k..round(), index t - k.
  const std::vector<SuffixHistogram>& history() const { return history_; }
  const std::vector<SuffixHistogram>& noisy_history() const {
    return noisy_history_;
  }
  const std::optional<PaddingFailure>& failure() const { return failure_; }
  // Smallest p_s^t (or hat C value that failed) seen so far; how much
  // padding was left over.
  int64_t min_margin() const { return min_margin_; }

 private:
  WindowSynthesizer(WindowSynthConfig cfg, int64_t n_pad, NoiseScale noise)
      : cfg_(cfg), n_pad_(n_pad), noise_(noise) {}

  absl::StatusOr<SuffixHistogram> NoisyHistogram(const BitPanel& data, int t,
                                                 Rng& rng) const;
  absl::Status Fail(int t, std::string key, int64_t value);

  WindowSynthConfig cfg_;
  int64_t n_pad_;
  NoiseScale noise_;
  int round_ = 0;
  bool failed_ = false;
  SyntheticStore store_;
  // Last k bits of every synthetic record.
  std::vector<uint32_t> codes_;
  std::vector<SuffixHistogram> history_;
  std::vector<SuffixHistogram> noisy_history_;
  std::optional<PaddingFailure> failure_;
  int64_t min_margin_ = INT64_MAX;
};

}  // namespace longsynth

#endif  // LONGSYNTH_WINDOW_SYNTH_H_
