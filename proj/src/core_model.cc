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

#include "longsynth/core_model.h"

#include <algorithm>
#include <bit>
#include <utility>

#include "absl/strings/str_cat.h"

namespace longsynth {

std::vector<uint8_t> BitPanel::row(std::size_t i) const {
  std::vector<uint8_t> out;
  out.reserve(columns_.size());
  for (const auto& column : columns_) out.push_back(column[i]);
  return out;
}

uint32_t BitPanel::SuffixCode(std::size_t i, int k, int t) const {
  uint32_t code = 0;
  for (int r = t - k + 1; r <= t; ++r) code = (code << 1) | bit(i, r);
  return code;
}

absl::Status BitPanel::AppendColumn(std::vector<uint8_t> column) {
  if (column.size() != population_) {
    return absl::InvalidArgumentError(
        absl::StrCat("column length ", column.size(),
                     " does not match population ", population_));
  }
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (column[i] > 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-binary value ", static_cast<int>(column[i]),
                       " for individual ", i));
    }
  }
  columns_.push_back(std::move(column));
  return absl::OkStatus();
}

absl::StatusOr<LongitudinalDataset> LongitudinalDataset::FromRows(
    const std::vector<std::vector<uint8_t>>& rows) {
  LongitudinalDataset data(rows.size());
  if (rows.empty()) return data;
  const std::size_t width = rows.front().size();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != width) {
      return absl::InvalidArgumentError(absl::StrCat(
          "row ", i, " has ", rows[i].size(), " rounds, expected ", width));
    }
  }
  for (std::size_t t = 0; t < width; ++t) {
    RoundUpdate update{static_cast<int>(t) + 1, {}};
    update.bits.reserve(rows.size());
    for (const auto& r : rows) update.bits.push_back(r[t]);
    if (absl::Status s = data.IngestRound(update); !s.ok()) return s;
  }
  return data;
}

absl::Status LongitudinalDataset::IngestRound(const RoundUpdate& update) {
  if (update.t != t_max() + 1) {
    return absl::FailedPreconditionError(
        absl::StrCat("out-of-order round ", update.t, "; expected ",
                     t_max() + 1));
  }
  return AppendColumn(update.bits);
}

absl::StatusOr<SuffixKey> SuffixKey::Parse(std::string_view bits) {
  if (bits.empty() || bits.size() > kMaxWindow) {
    return absl::InvalidArgumentError(
        absl::StrCat("suffix length must be in [1, ", kMaxWindow, "]"));
  }
  uint32_t code = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      return absl::InvalidArgumentError(
          absl::StrCat("suffix '", std::string(bits), "' is not a bit string"));
    }
    code = (code << 1) | static_cast<uint32_t>(c - '0');
  }
  return SuffixKey(static_cast<int>(bits.size()), code);
}

int SuffixKey::Weight() const { return std::popcount(code_); }

std::string SuffixKey::ToString() const {
  std::string out(k_, '0');
  for (int j = 0; j < k_; ++j) {
    if ((code_ >> (k_ - 1 - j)) & 1u) out[j] = '1';
  }
  return out;
}

int64_t SuffixHistogram::Total() const {
  int64_t total = 0;
  for (int64_t c : counts_) total += c;
  return total;
}

int64_t SuffixHistogram::Min() const {
  return *std::min_element(counts_.begin(), counts_.end());
}

absl::StatusOr<SuffixHistogram> TrueSuffixHistogram(const BitPanel& data,
                                                    int k, int t) {
  if (k < 1 || k > kMaxWindow) {
    return absl::InvalidArgumentError(absl::StrCat("bad window length ", k));
  }
  if (t < k) {
    return absl::InvalidArgumentError(
        absl::StrCat("histogram undefined for t=", t, " < k=", k));
  }
  if (t > data.rounds()) {
    return absl::OutOfRangeError(absl::StrCat(
        "round ", t, " exceeds the ", data.rounds(), " available rounds"));
  }
  SuffixHistogram hist(k);
  for (std::size_t i = 0; i < data.population(); ++i) {
    ++hist[data.SuffixCode(i, k, t)];
  }
  return hist;
}

std::vector<int> HammingWeights(const BitPanel& data, int t) {
  std::vector<int> weights(data.population(), 0);
  for (int r = 1; r <= t; ++r) {
    auto column = data.column(r);
    for (std::size_t i = 0; i < weights.size(); ++i) weights[i] += column[i];
  }
  return weights;
}

absl::StatusOr<std::vector<int64_t>> TrueCumulativeCounts(const BitPanel& data,
                                                          int t) {
  if (t < 1 || t > data.rounds()) {
    return absl::OutOfRangeError(
        absl::StrCat("round ", t, " outside [1, ", data.rounds(), "]"));
  }
  // Exact-weight histogram, then suffix sums.
  std::vector<int64_t> counts(t + 2, 0);
  for (int w : HammingWeights(data, t)) ++counts[w];
  for (int b = t; b >= 0; --b) counts[b] += counts[b + 1];
  counts.pop_back();
  return counts;
}

}  // namespace longsynth
