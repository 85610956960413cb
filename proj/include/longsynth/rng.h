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

#ifndef LONGSYNTH_RNG_H_
#define LONGSYNTH_RNG_H_

#include <cstdint>
#include <random>
#include <span>

namespace longsynth {

using uint128 = unsigned __int128;

// Mixes a base seed and a stream index into an independent seed.
uint64_t DeriveSeed(uint64_t base_seed, uint64_t stream);

// Seeded random source. Every draw is built from raw 64-bit engine output
// with rejection, so sequences are identical on every conforming platform
// (std:: distributions are implementation-defined and are not used).
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t seed() const { return seed_; }

  // Child generator for `stream`; depends only on this generator's seed,
  // not on how many values have been drawn.
  Rng Fork(uint64_t stream) const { return Rng(DeriveSeed(seed_, stream)); }

  uint64_t NextU64() { return engine_(); }
  // Uniform on [0, bound); bound > 0.
  uint64_t Uniform(uint64_t bound);
  uint128 Uniform(uint128 bound);
  bool Coin() { return (engine_() >> 63) != 0; }
  // Uniform double in [0, 1) with 53 random bits. Used only for data
  // simulation, never for privacy noise.
  double UnitDouble();

  // Moves `count` elements chosen uniformly without replacement to the
  // front of `items` (partial Fisher-Yates).
  template <typename T>
  void SelectPrefix(std::span<T> items, std::size_t count) {
    for (std::size_t j = 0; j < count; ++j) {
      std::size_t pick = j + Uniform(static_cast<uint64_t>(items.size() - j));
      std::swap(items[j], items[pick]);
    }
  }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace longsynth

#endif  // LONGSYNTH_RNG_H_
