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

#include "longsynth/discrete_gaussian.h"

#include <cassert>
#include <cmath>

namespace longsynth {
namespace {

using int128 = __int128;

// Bernoulli(exp(-num/den)) for num <= den.
bool SampleBernoulliExpSmall(uint128 num, uint128 den, Rng& rng) {
  // Returns true iff the first failing trial index is odd, where trial k
  // succeeds with probability gamma/k.
  uint128 k = 1;
  for (;;) {
    uint128 scaled;
    if (__builtin_mul_overflow(den, k, &scaled)) return (k % 2) == 1;
    if (!SampleBernoulli(num, scaled, rng)) break;
    ++k;
  }
  return (k % 2) == 1;
}

// Largest r with r^2 <= num/den.
int64_t FloorSqrt(const Rational& q) {
  const long double approx =
      std::sqrt(static_cast<long double>(q.num) / q.den);
  auto fits = [&](int128 r) { return r * r * q.den <= q.num; };
  int128 r = static_cast<int128>(approx);
  while (r > 0 && !fits(r)) --r;
  while (fits(r + 1)) ++r;
  return static_cast<int64_t>(r);
}

}  // namespace

bool SampleBernoulli(uint128 num, uint128 den, Rng& rng) {
  assert(den > 0 && num <= den);
  return rng.Uniform(den) < num;
}

bool SampleBernoulliExp(uint128 num, uint128 den, Rng& rng) {
  while (num > den) {
    if (!SampleBernoulliExpSmall(1, 1, rng)) return false;
    num -= den;
  }
  return SampleBernoulliExpSmall(num, den, rng);
}

int64_t SampleDiscreteLaplace(int64_t scale, Rng& rng) {
  assert(scale >= 1);
  const uint64_t t = static_cast<uint64_t>(scale);
  for (;;) {
    const uint64_t u = rng.Uniform(t);
    if (!SampleBernoulliExp(u, t, rng)) continue;
    uint64_t v = 0;
    while (SampleBernoulliExp(1, 1, rng)) ++v;
    const uint64_t magnitude = u + t * v;
    const bool negative = rng.Coin();
    if (negative && magnitude == 0) continue;
    return negative ? -static_cast<int64_t>(magnitude)
                    : static_cast<int64_t>(magnitude);
  }
}

int64_t SampleDiscreteGaussian(const NoiseScale& scale, Rng& rng) {
  if (scale.is_zero()) return 0;
  const Rational& s2 = scale.sigma2();
  const int64_t t = FloorSqrt(s2) + 1;
  // gamma = (|y| - s2/t)^2 / (2 s2) = (|y| t den - num)^2 / (2 num den t^2)
  const int128 denom = int128{2} * s2.num * s2.den * t * t;
  for (;;) {
    const int64_t y = SampleDiscreteLaplace(t, rng);
    const int128 magnitude = y < 0 ? -int128{y} : int128{y};
    int128 scaled;
    int128 squared;
    if (__builtin_mul_overflow(magnitude, int128{t} * s2.den, &scaled)) {
      continue;  // gamma > 2^24: acceptance probability below exp(-2^24).
    }
    const int128 diff = scaled - s2.num;
    if (__builtin_mul_overflow(diff, diff, &squared)) continue;
    if (SampleBernoulliExp(static_cast<uint128>(squared),
                           static_cast<uint128>(denom), rng)) {
      return y;
    }
  }
}

}  // namespace longsynth
