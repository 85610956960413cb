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

#include "longsynth/window_synth.h"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <utility>

#include "absl/strings/str_cat.h"
#include "longsynth/discrete_gaussian.h"

namespace longsynth {
namespace {

absl::Status CheckWindow(int horizon, int k) {
  if (k < 1 || k > kMaxWindow) {
    return absl::InvalidArgumentError(
        absl::StrCat("window length k=", k, " outside [1, ", kMaxWindow, "]"));
  }
  if (horizon < k) {
    return absl::InvalidArgumentError(
        absl::StrCat("horizon T=", horizon, " is shorter than k=", k));
  }
  return absl::OkStatus();
}

absl::Status CheckProbability(double p, const char* name) {
  if (!(p > 0 && p < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " must lie in (0, 1), got ", p));
  }
  return absl::OkStatus();
}

// ln(2^k (T-k+1) / beta) without overflowing 2^k.
double UnionLog(int horizon, int k, double beta) {
  return k * std::log(2.0) + std::log(static_cast<double>(horizon - k + 1)) -
         std::log(beta);
}

// The k-1 low bits of `code` as a string; empty when k = 1.
std::string OverlapString(uint32_t code, int k) {
  if (k == 1) return "";
  return SuffixKey(k - 1, code).ToString();
}

}  // namespace

absl::StatusOr<int64_t> ComputeNPad(int horizon, int k, PrivacyBudget rho,
                                    double beta_target) {
  if (absl::Status s = CheckWindow(horizon, k); !s.ok()) return s;
  if (absl::Status s = CheckProbability(beta_target, "beta_target"); !s.ok()) {
    return s;
  }
  if (rho.rho() <= 0) {
    return absl::InvalidArgumentError("padding needs a positive rho");
  }
  const double steps = horizon - k + 1;
  return static_cast<int64_t>(
      std::ceil(std::sqrt(steps / rho.rho() * UnionLog(horizon, k, beta_target))));
}

absl::StatusOr<double> ComputeErrorBound(int horizon, int k, PrivacyBudget rho,
                                         double beta) {
  if (absl::Status s = CheckWindow(horizon, k); !s.ok()) return s;
  if (absl::Status s = CheckProbability(beta, "beta"); !s.ok()) return s;
  if (rho.rho() <= 0) {
    return absl::InvalidArgumentError("error bound needs a positive rho");
  }
  const double steps = horizon - k + 1;
  return (std::sqrt(steps / rho.rho()) + 1.0 / std::sqrt(2.0)) *
         std::sqrt(UnionLog(horizon, k, beta));
}

absl::StatusOr<double> ComputeRelativeErrorBound(int horizon, int k,
                                                 PrivacyBudget rho, double beta,
                                                 int64_t n, double c_frac) {
  if (n <= 0) return absl::InvalidArgumentError("n must be positive");
  if (!(c_frac >= 0 && c_frac <= 1)) {
    return absl::InvalidArgumentError("C fraction must lie in [0, 1]");
  }
  auto lambda = ComputeErrorBound(horizon, k, rho, beta);
  if (!lambda.ok()) return lambda.status();
  return (2.0 * *lambda + std::ldexp(*lambda, k + 1) * c_frac) /
         static_cast<double>(n);
}

std::pair<int64_t, int64_t> ProjectOverlap(int64_t pool, int64_t noisy_zero,
                                           int64_t noisy_one, int sign) {
  // gap = 2 Delta_z; an odd gap takes b_z = sign / 2.
  const int64_t gap = pool - (noisy_zero + noisy_one);
  if (gap % 2 == 0) return {noisy_zero + gap / 2, noisy_one + gap / 2};
  return {noisy_zero + (gap + sign) / 2, noisy_one + (gap - sign) / 2};
}

absl::StatusOr<WindowSynthesizer> WindowSynthesizer::Create(
    const WindowSynthConfig& cfg) {
  if (absl::Status s = CheckWindow(cfg.horizon, cfg.k); !s.ok()) return s;
  if (absl::Status s = CheckProbability(cfg.beta_target, "beta_target");
      !s.ok()) {
    return s;
  }
  if (cfg.n_pad_override && *cfg.n_pad_override < 0) {
    return absl::InvalidArgumentError("n_pad must be non-negative");
  }
  if (cfg.noiseless) {
    return WindowSynthesizer(cfg, cfg.n_pad_override.value_or(0),
                             NoiseScale::Zero());
  }
  auto noise = NoiseScale::ForBudget(cfg.horizon - cfg.k + 1, cfg.rho);
  if (!noise.ok()) return noise.status();
  int64_t n_pad;
  if (cfg.n_pad_override) {
    n_pad = *cfg.n_pad_override;
  } else {
    auto computed = ComputeNPad(cfg.horizon, cfg.k, cfg.rho, cfg.beta_target);
    if (!computed.ok()) return computed.status();
    n_pad = *computed;
  }
  return WindowSynthesizer(cfg, n_pad, *noise);
}

double WindowSynthesizer::per_step_rho() const {
  return cfg_.rho.rho() / (cfg_.horizon - cfg_.k + 1);
}

absl::StatusOr<SuffixHistogram> WindowSynthesizer::NoisyHistogram(
    const BitPanel& data, int t, Rng& rng) const {
  auto hist = TrueSuffixHistogram(data, cfg_.k, t);
  if (!hist.ok()) return hist.status();
  // Bins are noised in lexicographic order so a seed fixes every draw.
  for (uint32_t s = 0; s < hist->size(); ++s) {
    (*hist)[s] += n_pad_ + SampleDiscreteGaussian(noise_, rng);
  }
  return hist;
}

absl::Status WindowSynthesizer::Fail(int t, std::string key, int64_t value) {
  failed_ = true;
  min_margin_ = std::min(min_margin_, value);
  failure_ = PaddingFailure{t, key, value};
  return absl::ResourceExhaustedError(
      absl::StrCat("padding exhausted at t=", t, " key='", key,
                   "' value=", value));
}

absl::Status WindowSynthesizer::Initialize(const BitPanel& data, Rng& rng) {
  if (round_ != 0) {
    return absl::FailedPreconditionError("synthesizer already initialized");
  }
  const int k = cfg_.k;
  auto noisy = NoisyHistogram(data, k, rng);
  if (!noisy.ok()) return noisy.status();
  for (uint32_t s = 0; s < noisy->size(); ++s) {
    if ((*noisy)[s] < 0) {
      return Fail(k, SuffixKey(k, s).ToString(), (*noisy)[s]);
    }
  }

  // Block assignment: the first hat C_{0..0} records get suffix 0..0, and so
  // on in lexicographic order.
  const std::size_t m = static_cast<std::size_t>(noisy->Total());
  store_ = SyntheticStore(m);
  codes_.clear();
  codes_.reserve(m);
  for (uint32_t s = 0; s < noisy->size(); ++s) {
    codes_.insert(codes_.end(), static_cast<std::size_t>((*noisy)[s]), s);
  }
  for (int j = 1; j <= k; ++j) {
    std::vector<uint8_t> column(m);
    for (std::size_t i = 0; i < m; ++i) column[i] = (codes_[i] >> (k - j)) & 1u;
    if (absl::Status s = store_.Append(std::move(column)); !s.ok()) return s;
  }
  min_margin_ = std::min(min_margin_, noisy->Min());
  history_.push_back(*noisy);
  noisy_history_.push_back(*std::move(noisy));
  round_ = k;
  return absl::OkStatus();
}

absl::StatusOr<std::span<const uint8_t>> WindowSynthesizer::Step(
    const BitPanel& data, int t, Rng& rng) {
  if (failed_) {
    return absl::FailedPreconditionError("run already failed");
  }
  if (round_ == 0) {
    return absl::FailedPreconditionError("Initialize must run first");
  }
  if (t != round_ + 1) {
    return absl::FailedPreconditionError(
        absl::StrCat("out-of-order round ", t, "; expected ", round_ + 1));
  }
  if (t > cfg_.horizon) {
    return absl::OutOfRangeError(
        absl::StrCat("round ", t, " is past the horizon ", cfg_.horizon));
  }
  const int k = cfg_.k;
  auto noisy = NoisyHistogram(data, t, rng);
  if (!noisy.ok()) return noisy.status();

  const uint32_t half = 1u << (k - 1);
  const SuffixHistogram& prev = history_.back();
  SuffixHistogram next(k);
  for (uint32_t z = 0; z < half; ++z) {
    const uint32_t zero = z << 1;
    const uint32_t one = zero | 1u;
    const int64_t pool = prev[z] + prev[half | z];
    int sign = 0;
    if ((pool - (*noisy)[zero] - (*noisy)[one]) % 2 != 0) {
      sign = rng.Coin() ? 1 : -1;
    }
    std::tie(next[zero], next[one]) =
        ProjectOverlap(pool, (*noisy)[zero], (*noisy)[one], sign);
  }
  for (uint32_t z = 0; z < half; ++z) {
    const int64_t low = std::min(next[z << 1], next[(z << 1) | 1u]);
    if (low < 0) return Fail(t, OverlapString(z, k), low);
  }

  std::vector<std::vector<uint32_t>> pools(half);
  for (uint32_t i = 0; i < codes_.size(); ++i) {
    pools[codes_[i] & (half - 1)].push_back(i);
  }
  std::vector<uint8_t> column(codes_.size(), 0);
  for (uint32_t z = 0; z < half; ++z) {
    auto& pool = pools[z];
    if (static_cast<int64_t>(pool.size()) != prev[z] + prev[half | z]) {
      return absl::InternalError(
          absl::StrCat("synthetic records no longer realize p at t=", t - 1));
    }
    const auto ones = static_cast<std::size_t>(next[(z << 1) | 1u]);
    rng.SelectPrefix(std::span<uint32_t>(pool), ones);
    for (std::size_t j = 0; j < ones; ++j) column[pool[j]] = 1;
  }
  const uint32_t mask = (k >= 32) ? ~0u : ((1u << k) - 1);
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    codes_[i] = ((codes_[i] << 1) | column[i]) & mask;
  }
  if (absl::Status s = store_.Append(std::move(column)); !s.ok()) return s;

  min_margin_ = std::min(min_margin_, next.Min());
  history_.push_back(std::move(next));
  noisy_history_.push_back(*std::move(noisy));
  round_ = t;
  return store_.column(t);
}

absl::Status WindowSynthesizer::Run(const BitPanel& data, Rng& rng) {
  if (data.rounds() < cfg_.horizon) {
    return absl::InvalidArgumentError(
        absl::StrCat("data has ", data.rounds(), " rounds; horizon is ",
                     cfg_.horizon));
  }
  if (absl::Status s = Initialize(data, rng); !s.ok()) return s;
  for (int t = cfg_.k + 1; t <= cfg_.horizon; ++t) {
    if (auto column = Step(data, t, rng); !column.ok()) return column.status();
  }
  return absl::OkStatus();
}

}  // namespace longsynth
