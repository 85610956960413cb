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

#include "longsynth/privacy.h"

#include <bit>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace longsynth {
namespace {

// Both terms of sigma^2 stay below this so the sampler's 128-bit
// intermediates cannot overflow.
constexpr int64_t kMaxTerm = int64_t{1} << 50;
constexpr int64_t kGridDenominator = int64_t{1} << 20;

}  // namespace

absl::StatusOr<PrivacyBudget> PrivacyBudget::Create(double rho) {
  if (!(rho >= 0) || !std::isfinite(rho)) {
    return absl::InvalidArgumentError(
        absl::StrCat("rho must be finite and non-negative, got ", rho));
  }
  return PrivacyBudget(rho);
}

PrivacyBudget Compose(PrivacyBudget a, PrivacyBudget b) {
  return *PrivacyBudget::Create(a.rho() + b.rho());
}

absl::StatusOr<double> ZcdpToApproxDp(PrivacyBudget rho, double delta) {
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  return rho.rho() + 2.0 * std::sqrt(rho.rho() * std::log(1.0 / delta));
}

std::optional<Rational> RationalApproximation(double x, int64_t max_den,
                                              double rel_tol) {
  if (!(x >= 0) || !std::isfinite(x)) return std::nullopt;
  if (x == 0) return Rational{0, 1};
  long double rest = x;
  // Convergents h/k.
  int64_t h_prev = 1, h_prev2 = 0;
  int64_t k_prev = 0, k_prev2 = 1;
  for (int iter = 0; iter < 64; ++iter) {
    long double a_real = std::floor(rest);
    if (a_real > static_cast<long double>(kMaxTerm)) return std::nullopt;
    const int64_t a = static_cast<int64_t>(a_real);
    int64_t h, k;
    if (__builtin_mul_overflow(a, h_prev, &h) ||
        __builtin_add_overflow(h, h_prev2, &h) ||
        __builtin_mul_overflow(a, k_prev, &k) ||
        __builtin_add_overflow(k, k_prev2, &k)) {
      return std::nullopt;
    }
    if (k > max_den) return std::nullopt;
    const long double approx = static_cast<long double>(h) / k;
    if (std::fabs(approx - x) <= rel_tol * x) return Rational{h, k};
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const long double frac = rest - a_real;
    if (frac <= 0) return std::nullopt;
    rest = 1.0L / frac;
  }
  return std::nullopt;
}

absl::StatusOr<NoiseScale> NoiseScale::Exact(int64_t num, int64_t den) {
  if (num < 0 || den <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma^2 = ", num, "/", den, " is not a valid scale"));
  }
  const int64_t g = std::gcd(num, den);
  num /= g;
  den /= g;
  if (num >= kMaxTerm || den >= kMaxTerm) {
    return absl::OutOfRangeError(
        absl::StrCat("sigma^2 = ", num, "/", den, " exceeds sampler range"));
  }
  return NoiseScale(Rational{num, den});
}

absl::StatusOr<NoiseScale> NoiseScale::AtLeast(double sigma2) {
  if (!(sigma2 >= 0) || !std::isfinite(sigma2)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma^2 must be finite and non-negative, got ", sigma2));
  }
  int64_t den = kGridDenominator;
  while (den > 1 && sigma2 * static_cast<double>(den) >= kMaxTerm / 2) {
    den /= 2;
  }
  const double num = std::ceil(sigma2 * static_cast<double>(den));
  if (num >= static_cast<double>(kMaxTerm)) {
    return absl::OutOfRangeError(
        absl::StrCat("sigma^2 = ", sigma2, " exceeds sampler range"));
  }
  return Exact(static_cast<int64_t>(num), den);
}

absl::StatusOr<NoiseScale> NoiseScale::ForBudget(int64_t sensitivity2,
                                                 PrivacyBudget rho) {
  if (rho.rho() <= 0) {
    return absl::InvalidArgumentError(
        "a zero privacy budget cannot calibrate noise");
  }
  if (sensitivity2 < 0) {
    return absl::InvalidArgumentError("negative sensitivity");
  }
  if (auto r = RationalApproximation(rho.rho(), int64_t{1} << 30, 1e-12)) {
    int64_t num;
    if (!__builtin_mul_overflow(sensitivity2, r->den, &num)) {
      auto exact = Exact(num, 2 * r->num);
      if (exact.ok()) return exact;
    }
  }
  return AtLeast(static_cast<double>(sensitivity2) / (2.0 * rho.rho()));
}

absl::StatusOr<BudgetSchedule> BudgetSchedule::FromShares(
    std::vector<double> shares) {
  for (double s : shares) {
    if (!(s >= 0) || !std::isfinite(s)) {
      return absl::InvalidArgumentError(
          absl::StrCat("schedule entry ", s, " is not a valid budget"));
    }
  }
  return BudgetSchedule(std::move(shares));
}

PrivacyBudget BudgetSchedule::at(std::size_t i) const {
  return *PrivacyBudget::Create(per_unit_[i]);
}

PrivacyBudget BudgetSchedule::Total() const {
  PrivacyBudget total = PrivacyBudget::Zero();
  for (double s : per_unit_) total = Compose(total, *PrivacyBudget::Create(s));
  return total;
}

int CeilLog2(int64_t x) {
  if (x <= 1) return 0;
  return std::bit_width(static_cast<uint64_t>(x - 1));
}

absl::StatusOr<BudgetSchedule> SplitUniform(PrivacyBudget rho, int steps) {
  if (steps < 1) {
    return absl::InvalidArgumentError("need at least one step");
  }
  return BudgetSchedule::FromShares(
      std::vector<double>(steps, rho.rho() / steps));
}

int64_t CumulativeWeight(int horizon, int b) {
  const int64_t depth = std::max(CeilLog2(horizon - b + 1), 1);
  return depth * depth * depth;
}

absl::StatusOr<BudgetSchedule> SplitCumulative(PrivacyBudget rho,
                                               int horizon) {
  if (horizon < 1) {
    return absl::InvalidArgumentError("horizon must be at least 1");
  }
  int64_t total = 0;
  for (int b = 1; b <= horizon; ++b) total += CumulativeWeight(horizon, b);
  std::vector<double> shares;
  shares.reserve(horizon);
  for (int b = 1; b <= horizon; ++b) {
    shares.push_back(rho.rho() * static_cast<double>(CumulativeWeight(horizon, b)) /
                     static_cast<double>(total));
  }
  return BudgetSchedule::FromShares(std::move(shares));
}

}  // namespace longsynth
