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

// zCDP budgets, composition, budget schedules and the noise scales derived
// from them.

#ifndef LONGSYNTH_PRIVACY_H_
#define LONGSYNTH_PRIVACY_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"

namespace longsynth {

// A zero-concentrated DP parameter rho >= 0.
class PrivacyBudget {
 public:
  static absl::StatusOr<PrivacyBudget> Create(double rho);
  static PrivacyBudget Zero() { return PrivacyBudget(0.0); }

  double rho() const { return rho_; }

 private:
  explicit PrivacyBudget(double rho) : rho_(rho) {}
  double rho_;
};

// Sequential composition: rho_a + rho_b.
PrivacyBudget Compose(PrivacyBudget a, PrivacyBudget b);

// Smallest epsilon such that rho-zCDP implies (epsilon, delta)-DP under the
// standard conversion: rho + 2 sqrt(rho ln(1/delta)).
absl::StatusOr<double> ZcdpToApproxDp(PrivacyBudget rho, double delta);

// A non-negative rational p/q with q > 0, kept in lowest terms.
struct Rational {
  int64_t num = 0;
  int64_t den = 1;

  double ToDouble() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

// Best rational approximation of `x` >= 0 by continued fractions with
// denominator at most `max_den`, if one lies within relative error `rel_tol`.
std::optional<Rational> RationalApproximation(double x, int64_t max_den,
                                              double rel_tol);

// Variance parameter sigma^2 of the discrete Gaussian, held as an exact
// rational so the sampler never rounds a float.
class NoiseScale {
 public:
  static NoiseScale Zero() { return NoiseScale(Rational{0, 1}); }
  static absl::StatusOr<NoiseScale> Exact(int64_t num, int64_t den);
  // Smallest value on a dyadic grid that is >= sigma2. Rounding up keeps the
  // privacy guarantee of the requested scale.
  static absl::StatusOr<NoiseScale> AtLeast(double sigma2);
  // sigma^2 = sensitivity2 / (2 rho) for an integer squared sensitivity.
  // Exact when rho is a short decimal or a small-denominator fraction,
  // otherwise rounded up as in AtLeast.
  static absl::StatusOr<NoiseScale> ForBudget(int64_t sensitivity2,
                                              PrivacyBudget rho);

  const Rational& sigma2() const { return sigma2_; }
  double value() const { return sigma2_.ToDouble(); }
  bool is_zero() const { return sigma2_.num == 0; }

 private:
  explicit NoiseScale(Rational sigma2) : sigma2_(sigma2) {}
  Rational sigma2_;
};

// Per-unit budgets rho_1..rho_n summing to a total.
class BudgetSchedule {
 public:
  BudgetSchedule() = default;
  // Entries must be non-negative.
  static absl::StatusOr<BudgetSchedule> FromShares(std::vector<double> shares);

  const std::vector<double>& per_unit() const { return per_unit_; }
  std::size_t size() const { return per_unit_.size(); }
  PrivacyBudget at(std::size_t i) const;  // 0-based
  PrivacyBudget Total() const;

 private:
  explicit BudgetSchedule(std::vector<double> shares)
      : per_unit_(std::move(shares)) {}
  std::vector<double> per_unit_;
};

// ceil(log2(x)) for x >= 1.
int CeilLog2(int64_t x);

// rho/steps for each of `steps` updates.
absl::StatusOr<BudgetSchedule> SplitUniform(PrivacyBudget rho, int steps);

// Weight for threshold b of a horizon-T cumulative release:
// max(ceil(log2(T - b + 1)), 1)^3.
int64_t CumulativeWeight(int horizon, int b);
// rho_b proportional to CumulativeWeight(T, b), b = 1..T.
absl::StatusOr<BudgetSchedule> SplitCumulative(PrivacyBudget rho, int horizon);

}  // namespace longsynth

#endif  // LONGSYNTH_PRIVACY_H_
