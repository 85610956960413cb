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

// Repeated synthesizer runs over one dataset, with per-repetition query
// answers, error summaries and the metadata needed to debias them.

#ifndef LONGSYNTH_HARNESS_EXPERIMENT_H_
#define LONGSYNTH_HARNESS_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "longsynth/core_model.h"
#include "longsynth/query.h"
#include "longsynth/window_synth.h"

namespace longsynth {

// Delta used when the metadata reports an (epsilon, delta) translation.
inline constexpr double kReportDelta = 1e-6;

struct RunManifest {
  enum class Mode { kWindow, kCumulative };
  Mode mode = Mode::kWindow;
  // Free-form description of where the data came from, echoed into metadata.
  nlohmann::json data_source = nlohmann::json::object();
  int horizon = 0;  // T; rounds beyond T in the data are ignored
  int k = 3;        // window mode only
  double rho = 0;
  double beta_target = 0.05;
  std::optional<int64_t> n_pad;
  int repetitions = 1;
  uint64_t seed = 0;
  // Empty means the default query list for the mode.
  std::vector<QuerySpec> queries;
  bool noiseless = false;
  bool force_window = false;
  // Failure probability for the reported error bounds.
  double accuracy_beta = 0.05;
  // Worker threads; 0 picks the hardware concurrency. Never affects output.
  int threads = 0;
  // Also keep repetition 0's synthetic records.
  bool emit_synthetic = false;
};

std::string ModeName(RunManifest::Mode mode);

// Every q_s^t for t = k..T (window) or every c_b^t for 1 <= b <= t <= T
// (cumulative).
std::vector<QuerySpec> DefaultQueries(RunManifest::Mode mode, int horizon,
                                      int k);

// For each quarter ending at t = 3, 6, ...: at least one, at least two, two
// consecutive, and all three of the last three bits set.
std::vector<QuerySpec> QuarterlyQueries(int horizon);

// Per-round error of one repetition. For window runs the additive error is
// max_s |p_s^t - (C_s^t + n_pad)|; for cumulative runs it is
// max_b |hat S_b^t - S_b^t| and `counter_additive` is the same maximum over
// the raw counter outputs.
struct RoundError {
  int t = 0;
  int64_t additive = 0;
  double debiased_rel = 0;
  double raw_rel = 0;
  int64_t counter_additive = 0;
};

struct RepetitionResult {
  int repetition = 0;
  uint64_t seed = 0;
  absl::Status status;
  std::optional<PaddingFailure> failure;
  // One entry per query; empty for refused queries and failed repetitions.
  std::vector<std::optional<QueryAnswer>> answers;
  std::vector<RoundError> rounds;
  int64_t max_additive = 0;
  double max_debiased_rel = 0;
  double max_raw_rel = 0;
  int64_t max_counter_additive = 0;
  // Smallest released window count (window runs).
  int64_t min_margin = 0;
};

struct QuerySummary {
  std::string label;
  int t = 0;
  double truth = 0;
  bool supported = true;
  std::string note;  // why a query was refused
  int n_ok = 0;
  double mean = 0;
  double std = 0;
  double p2_5 = 0;
  double median = 0;
  double p97_5 = 0;
  // Quantiles of |answer - truth| across repetitions.
  double err_median = 0;
  double err_p2_5 = 0;
  double err_p97_5 = 0;
  double err_max = 0;
};

struct ExperimentResult {
  std::vector<QuerySpec> queries;
  std::vector<double> truth;
  std::vector<RepetitionResult> repetitions;
  std::vector<QuerySummary> summaries;
  int n_ok = 0;
  nlohmann::json metadata;
  std::optional<SyntheticStore> synthetic;
  double wall_seconds = 0;
};

// Linear interpolation between order statistics (R type 7). `sorted` must be
// ascending and non-empty.
double Quantile(const std::vector<double>& sorted, double q);

// Runs every repetition. Repetition r draws from Rng(DeriveSeed(seed, r)),
// so results do not depend on scheduling. Failed repetitions are recorded,
// not fatal; invalid manifests are InvalidArgument.
absl::StatusOr<ExperimentResult> RunExperiment(const RunManifest& manifest,
                                               const LongitudinalDataset& data);

// Writes answers.csv, summary.csv, repetitions.csv, round_errors.csv,
// failures.csv, metadata.json and, if kept, synthetic.csv. The wall time
// goes to timing.json so every other file is reproducible byte for byte.
absl::Status WriteExperiment(const ExperimentResult& result,
                             const std::string& out_dir);

}  // namespace longsynth

#endif  // LONGSYNTH_HARNESS_EXPERIMENT_H_
