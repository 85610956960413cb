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


#ifndef LONGSYNTH_TESTS_TEST_UTIL_H_
#define LONGSYNTH_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <vector>

#include "longsynth/core_model.h"
#include "longsynth/rng.h"

namespace longsynth::testing {

// Rows of iid Bernoulli(p) bits drawn from `rng`.
inline std::vector<std::vector<uint8_t>> RandomRows(Rng& rng, std::size_t n,
                                                    int rounds, double p) {
  std::vector<std::vector<uint8_t>> rows(n, std::vector<uint8_t>(rounds));
  for (auto& row : rows) {
    for (auto& bit : row) bit = rng.UnitDouble() < p ? 1 : 0;
  }
  return rows;
}

inline LongitudinalDataset RandomDataset(Rng& rng, std::size_t n, int rounds,
                                         double p) {
  return *LongitudinalDataset::FromRows(RandomRows(rng, n, rounds, p));
}

// Brute-force suffix count straight from the row vectors.
inline int64_t CountSuffix(const std::vector<std::vector<uint8_t>>& rows,
                           const std::vector<uint8_t>& suffix, int t) {
  int64_t count = 0;
  const int k = static_cast<int>(suffix.size());
  for (const auto& row : rows) {
    bool match = true;
    for (int j = 0; j < k; ++j) match = match && row[t - k + j] == suffix[j];
    count += match ? 1 : 0;
  }
  return count;
}

// Brute-force #{i : x_i^1 + ... + x_i^t >= b}.
inline int64_t CountAtLeast(const std::vector<std::vector<uint8_t>>& rows,
                            int b, int t) {
  int64_t count = 0;
  for (const auto& row : rows) {
    int weight = 0;
    for (int j = 0; j < t; ++j) weight += row[j];
    count += weight >= b ? 1 : 0;
  }
  return count;
}

inline std::vector<std::vector<uint8_t>> RowsOf(const BitPanel& panel) {
  std::vector<std::vector<uint8_t>> rows;
  for (std::size_t i = 0; i < panel.population(); ++i) {
    rows.push_back(panel.row(i));
  }
  return rows;
}

}  // namespace longsynth::testing

#endif  // LONGSYNTH_TESTS_TEST_UTIL_H_
