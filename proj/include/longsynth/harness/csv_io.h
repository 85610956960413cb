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

#ifndef LONGSYNTH_HARNESS_CSV_IO_H_
#define LONGSYNTH_HARNESS_CSV_IO_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "longsynth/core_model.h"

namespace longsynth {

struct CsvOptions {
  bool header = false;
  // When set, a value v becomes 1 if v < threshold and 0 otherwise. When
  // unset, every cell must already be 0 or 1.
  std::optional<double> threshold;
};

struct IngestResult {
  LongitudinalDataset data;
  std::size_t rows_read = 0;
  // Rows with at least one missing cell (empty, NA, NaN or ".").
  std::size_t rows_dropped = 0;
};

// Rows are individuals, columns are rounds. Rows with missing cells are
// dropped; ragged rows, non-numeric cells and an empty result are errors.
absl::StatusOr<IngestResult> ParseCsv(std::istream& in,
                                      const CsvOptions& options);
absl::StatusOr<IngestResult> IngestCsv(const std::string& path,
                                       const CsvOptions& options);

// Writes one row per individual, one 0/1 column per round, no header.
absl::Status WriteBitCsv(const BitPanel& panel, const std::string& path);

// Round-trippable, locale-independent rendering.
std::string FormatDouble(double value);

}  // namespace longsynth

#endif  // LONGSYNTH_HARNESS_CSV_IO_H_
