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

#ifndef LONGSYNTH_CORE_MODEL_H_
#define LONGSYNTH_CORE_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace longsynth {

// Longest window the suffix machinery supports. Histograms hold 2^k bins.
inline constexpr int kMaxWindow = 24;

// A population of individuals observed over rounds, one {0,1} value per
// (individual, round). Rounds are 1-based. Storage is column-major with one
// byte per cell; columns are only ever appended.
class BitPanel {
 public:
  explicit BitPanel(std::size_t population = 0) : population_(population) {}

  std::size_t population() const { return population_; }
  int rounds() const { return static_cast<int>(columns_.size()); }

  // Value of individual `i` at round `t` (1-based).
  uint8_t bit(std::size_t i, int t) const { return columns_[t - 1][i]; }
  std::span<const uint8_t> column(int t) const { return columns_[t - 1]; }
  std::vector<uint8_t> row(std::size_t i) const;

  // Code of the `k` bits ending at round `t` for individual `i`, oldest bit
  // most significant. Requires k <= t <= rounds().
  uint32_t SuffixCode(std::size_t i, int k, int t) const;

  friend bool operator==(const BitPanel&, const BitPanel&) = default;

 protected:
  // Validates length and binary values, then appends.
  absl::Status AppendColumn(std::vector<uint8_t> column);

 private:
  std::size_t population_;
  std::vector<std::vector<uint8_t>> columns_;
};

// One round of reports from every individual.
struct RoundUpdate {
  int t = 0;
  std::vector<uint8_t> bits;
};

// Ground-truth input: n individuals, t_max rounds ingested so far.
class LongitudinalDataset : public BitPanel {
 public:
  explicit LongitudinalDataset(std::size_t n = 0) : BitPanel(n) {}

  // Builds a dataset from per-individual rows of equal length.
  static absl::StatusOr<LongitudinalDataset> FromRows(
      const std::vector<std::vector<uint8_t>>& rows);

  // Extends every row by one round. The update must carry round
  // t_max + 1 and exactly n binary values.
  absl::Status IngestRound(const RoundUpdate& update);

  int t_max() const { return rounds(); }
};

// The released artifact: m synthetic individuals whose rounds are published
// one column at a time. Released columns are never modified.
class SyntheticStore : public BitPanel {
 public:
  explicit SyntheticStore(std::size_t m = 0) : BitPanel(m) {}

  std::size_t m() const { return population(); }
  absl::Status Append(std::vector<uint8_t> column) {
    return AppendColumn(std::move(column));
  }
};

// A k-bit string. Stored as an integer code where the first (oldest) bit is
// the most significant, so integer order is lexicographic order with '0' < '1'.
class SuffixKey {
 public:
  SuffixKey(int k, uint32_t code) : k_(k), code_(code) {}

  static absl::StatusOr<SuffixKey> Parse(std::string_view bits);

  int k() const { return k_; }
  uint32_t code() const { return code_; }
  int Weight() const;
  std::string ToString() const;

  friend bool operator==(const SuffixKey&, const SuffixKey&) = default;
  friend auto operator<=>(const SuffixKey&, const SuffixKey&) = default;

 private:
  int k_;
  uint32_t code_;
};

// Counts for every k-bit suffix, zero bins included.
class SuffixHistogram {
 public:
  explicit SuffixHistogram(int k) : k_(k), counts_(std::size_t{1} << k, 0) {}

  int k() const { return k_; }
  std::size_t size() const { return counts_.size(); }

  int64_t& operator[](uint32_t code) { return counts_[code]; }
  int64_t operator[](uint32_t code) const { return counts_[code]; }
  int64_t operator[](const SuffixKey& key) const { return counts_[key.code()]; }

  std::span<const int64_t> counts() const { return counts_; }
  int64_t Total() const;
  int64_t Min() const;

  friend bool operator==(const SuffixHistogram&,
                         const SuffixHistogram&) = default;

 private:
  int k_;
  std::vector<int64_t> counts_;
};

// C_s^t: how many individuals have suffix s over rounds t-k+1..t.
// Only defined for k <= t <= rounds().
absl::StatusOr<SuffixHistogram> TrueSuffixHistogram(const BitPanel& data,
                                                    int k, int t);

// Hamming weight of every individual over rounds 1..t.
std::vector<int> HammingWeights(const BitPanel& data, int t);

// S_b^t = #{i : weight up to t >= b} for b = 0..t (index b). Thresholds
// above t are implicitly zero.
absl::StatusOr<std::vector<int64_t>> TrueCumulativeCounts(const BitPanel& data,
                                                          int t);

}  // namespace longsynth

#endif  // LONGSYNTH_CORE_MODEL_H_
