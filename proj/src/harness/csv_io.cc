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

#include "longsynth/harness/csv_io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace longsynth {
namespace {

bool IsMissing(absl::string_view cell) {
  return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" ||
         cell == ".";
}

}  // namespace

absl::StatusOr<IngestResult> ParseCsv(std::istream& in,
                                      const CsvOptions& options) {
  std::vector<std::vector<uint8_t>> rows;
  IngestResult result;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool have_width = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && options.header) continue;
    if (absl::StripAsciiWhitespace(line).empty()) continue;

    std::vector<absl::string_view> cells = absl::StrSplit(line, ',');
    if (!have_width) {
      width = cells.size();
      have_width = true;
    } else if (cells.size() != width) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, " has ", cells.size(),
                       " fields, expected ", width));
    }
    ++result.rows_read;

    std::vector<uint8_t> row;
    row.reserve(width);
    bool missing = false;
    for (absl::string_view raw : cells) {
      absl::string_view cell = absl::StripAsciiWhitespace(raw);
      if (IsMissing(cell)) {
        missing = true;
        break;
      }
      double value;
      auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(),
                                       value);
      if (ec != std::errc() || end != cell.data() + cell.size() ||
          !std::isfinite(value)) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", line_no, ": '", cell, "' is not numeric"));
      }
      if (options.threshold) {
        row.push_back(value < *options.threshold ? 1 : 0);
      } else if (value == 0 || value == 1) {
        row.push_back(static_cast<uint8_t>(value));
      } else {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_no, ": value ", cell,
            " is not binary; pass a threshold to binarize"));
      }
    }
    if (missing) {
      ++result.rows_dropped;
      continue;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    return absl::InvalidArgumentError("no complete rows remain");
  }
  auto data = LongitudinalDataset::FromRows(rows);
  if (!data.ok()) return data.status();
  result.data = *std::move(data);
  return result;
}

absl::StatusOr<IngestResult> IngestCsv(const std::string& path,
                                       const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return ParseCsv(in, options);
}

absl::Status WriteBitCsv(const BitPanel& panel, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  std::string line;
  for (std::size_t i = 0; i < panel.population(); ++i) {
    line.clear();
    for (int t = 1; t <= panel.rounds(); ++t) {
      if (t > 1) line.push_back(',');
      line.push_back(panel.bit(i, t) ? '1' : '0');
    }
    line.push_back('\n');
    out << line;
  }
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

}  // namespace longsynth
