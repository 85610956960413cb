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

#ifndef LONGSYNTH_QUERY_H_
#define LONGSYNTH_QUERY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "longsynth/core_model.h"
#include "longsynth/privacy.h"

namespace longsynth {

// q_s^t: the individual's last |s| bits at round t equal s.
struct WindowQuery {
  SuffixKey s;
  int t = 0;
};

// c_b^t: the individual's Hamming weight through round t is at least b.
struct CumulativeQuery {
  int b = 0;
  int t = 0;
};

// sum_s w_s q_s^t over k-bit suffixes; absent suffixes weigh 0.
struct LinearQuery {
  int k = 0;
  int t = 0;
  std::vector<double> weights;  // indexed by suffix code, size 2^k
  std::string name;
};

using QuerySpec = std::variant<WindowQuery, CumulativeQuery, LinearQuery>;

// Round the query is asked at.
int QueryRound(const QuerySpec& q);
// Number of trailing rounds the query reads (t for cumulative queries).
int QueryWindow(const QuerySpec& q);
// Stable label, e.g. "window:101", "cum:3", "linear:poverty2".
std::string QueryLabel(const QuerySpec& q);

// Parses the JSON list form:
//   {"kind":"window","s":"101","t":7}
//   {"kind":"cum","b":3,"t":12}
//   {"kind":"linear","t":7,"weights":{"110":1,"011":1},"name":"opt"}
absl::StatusOr<std::vector<QuerySpec>> ParseQueries(const nlohmann::json& list);
nlohmann::json QueryToJson(const QuerySpec& q);

// sum_i w(row i) as an exact integer-weighted count for window and cumulative
// queries. For linear queries the per-bin counts are integers and the weights
// are applied once per bin.
absl::StatusOr<double> WeightedCount(const BitPanel& data, const QuerySpec& q);

// (1/population) * WeightedCount.
absl::StatusOr<double> EvalQuery(const BitPanel& data, const QuerySpec& q);

// How a synthetic store was produced; decides which queries it supports and
// how padding is removed.
struct ReleaseInfo {
  enum class Kind { kWindow, kCumulative };
  Kind kind = Kind::kWindow;
  int k = 0;           // window length, kWindow only
  int64_t n_pad = 0;   // padding records per k-bit bin, kWindow only
  int64_t n = 0;       // size of the original population
};

struct QueryAnswer {
  double value = 0;  // debiased estimate of the true fraction
  double raw = 0;    // fraction over the m synthetic records
  bool unsupported = false;
};

// Evaluates a query on released synthetic data. Queries the release does not
// support (windows longer than k, cumulative queries on a window release,
// window queries on a cumulative release) are refused with an
// UnsupportedWindow error unless `force` is set; forced answers carry
// unsupported = true and are not debiased (value = raw).
absl::StatusOr<QueryAnswer> EvalSynthetic(const SyntheticStore& synth,
                                          const QuerySpec& q,
                                          const ReleaseInfo& release,
                                          bool force = false);

// (raw_count - n_pad) / n. Not clamped.
double DebiasFraction(int64_t raw_count, int64_t n_pad, int64_t n);

// c_b^t computed as a sum of full-horizon window queries over k = horizon
// bits, with rounds <= 0 read as 0. Refuses horizons above 12.
absl::StatusOr<double> CumulativeFromWindowOracle(const BitPanel& data, int b,
                                                  int t,
                                                  std::optional<int> k = {});

inline constexpr int kMaxOracleHorizon = 12;

// Error of a window release against the truth, with the bounds that should
// contain it.
struct RoundErrors {
  int t = 0;
  int64_t max_additive = 0;      // max_s |p_s^t - (C_s^t + n_pad)|
  double max_debiased_rel = 0;   // max_s |(p_s^t - n_pad) - C_s^t| / n
  double max_raw_rel = 0;        // max_s |p_s^t / m - C_s^t / n|
};

struct ErrorReport {
  std::vector<RoundErrors> rounds;
  int64_t max_additive = 0;
  double max_debiased_rel = 0;
  double max_raw_rel = 0;
  double additive_bound = 0;
  double debiased_rel_bound = 0;  // additive_bound / n
  double raw_rel_bound = 0;       // relative bound at the largest C/n seen
};

struct WindowReportConfig {
  int horizon = 0;
  int k = 1;
  PrivacyBudget rho = PrivacyBudget::Zero();
  double beta = 0.05;
  int64_t n_pad = 0;
};

// Compares rounds k..min(rounds of both sides). Bounds are left at 0 when
// rho is 0 (noiseless runs).
absl::StatusOr<ErrorReport> MaxErrorReport(const BitPanel& truth,
                                           const SyntheticStore& synth,
                                           const WindowReportConfig& cfg);

}  // namespace longsynth

#endif  // LONGSYNTH_QUERY_H_
