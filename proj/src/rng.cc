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

#include "longsynth/rng.h"

namespace longsynth {
namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 SeedEngine(uint64_t seed) {
  std::seed_seq seq{static_cast<uint32_t>(seed),
                    static_cast<uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

uint64_t DeriveSeed(uint64_t base_seed, uint64_t stream) {
  return SplitMix64(SplitMix64(base_seed) ^ SplitMix64(~stream));
}

Rng::Rng(uint64_t seed) : seed_(seed), engine_(SeedEngine(seed)) {}

uint64_t Rng::Uniform(uint64_t bound) {
  // Reject the low partial block so every residue is equally likely.
  const uint64_t threshold = -bound % bound;
  for (;;) {
    uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

uint128 Rng::Uniform(uint128 bound) {
  if (bound <= UINT64_MAX) return Uniform(static_cast<uint64_t>(bound));
  const uint128 threshold = -bound % bound;
  for (;;) {
    uint128 x = (static_cast<uint128>(engine_()) << 64) | engine_();
    if (x >= threshold) return x % bound;
  }
}

double Rng::UnitDouble() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace longsynth
