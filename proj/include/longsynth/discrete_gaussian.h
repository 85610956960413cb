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

// Exact samplers for the discrete Gaussian and its building blocks. All
// arithmetic is on integers and rationals; no floating-point value ever
// influences a draw.
//
// The construction samples a discrete Laplace with integer scale
// t = floor(sigma) + 1 and accepts Y with probability
// exp(-(|Y| - sigma^2/t)^2 / (2 sigma^2)). Bernoulli(exp(-gamma)) for a
// rational gamma is realised by the alternating-series trick for
// gamma <= 1, and by repeated Bernoulli(exp(-1)) trials for the integer part.

#ifndef LONGSYNTH_DISCRETE_GAUSSIAN_H_
#define LONGSYNTH_DISCRETE_GAUSSIAN_H_

#include <cstdint>

#include "longsynth/privacy.h"
#include "longsynth/rng.h"

namespace longsynth {

// Bernoulli(num/den) for 0 <= num <= den, den > 0.
bool SampleBernoulli(uint128 num, uint128 den, Rng& rng);

// Bernoulli(exp(-num/den)) for num >= 0, den > 0.
bool SampleBernoulliExp(uint128 num, uint128 den, Rng& rng);

// Pr[X = x] proportional to exp(-|x| / scale), scale >= 1.
int64_t SampleDiscreteLaplace(int64_t scale, Rng& rng);

// Pr[X = x] proportional to exp(-x^2 / (2 sigma^2)). Returns 0 when the
// scale is zero.
int64_t SampleDiscreteGaussian(const NoiseScale& scale, Rng& rng);

}  // namespace longsynth

#endif  // LONGSYNTH_DISCRETE_GAUSSIAN_H_
