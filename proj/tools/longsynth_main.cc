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

// Command-line front end: simulate data, run repeated synthesizer
// experiments, evaluate queries on released records, and print bounds.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "longsynth/core_model.h"
#include "longsynth/cumulative_synth.h"
#include "longsynth/harness/csv_io.h"
#include "longsynth/harness/experiment.h"
#include "longsynth/harness/simulate.h"
#include "longsynth/privacy.h"
#include "longsynth/query.h"
#include "longsynth/rng.h"
#include "longsynth/window_synth.h"

namespace longsynth {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitAllFailed = 3;

int Report(const absl::Status& status) {
  std::cerr << "longsynth: " << status << "\n";
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kPermissionDenied:
      return kExitInput;
    default:
      return kExitInternal;
  }
}

struct DataOptions {
  std::string input;
  bool header = false;
  std::optional<double> threshold;
  std::string simulate;
  int64_t n = 25000;
  double p = 0.5;
};

void AddDataOptions(CLI::App* app, DataOptions& opts) {
  auto* input = app->add_option("--input", opts.input,
                                "CSV file, one row per individual");
  app->add_flag("--header", opts.header, "First CSV line is a header");
  app->add_option("--threshold", opts.threshold,
                  "Binarize: value < threshold becomes 1");
  auto* sim = app->add_option(
      "--simulate", opts.simulate,
      "Simulated data instead of a file: all_ones, bernoulli, from_seed, "
      "sipp_like");
  app->add_option("--n", opts.n, "Simulated population size");
  app->add_option("--p", opts.p, "Bernoulli rate for --simulate bernoulli");
  input->excludes(sim);
}

// Simulated data draws from a stream of the base seed that no repetition
// uses.
constexpr uint64_t kDataStream = ~uint64_t{0};

absl::StatusOr<LongitudinalDataset> LoadData(const DataOptions& opts,
                                             int horizon, uint64_t seed,
                                             nlohmann::json& source) {
  if (!opts.input.empty()) {
    CsvOptions csv{opts.header, opts.threshold};
    auto ingested = IngestCsv(opts.input, csv);
    if (!ingested.ok()) return ingested.status();
    source = {{"csv", opts.input},
              {"header", opts.header},
              {"rows_read", ingested->rows_read},
              {"rows_dropped", ingested->rows_dropped}};
    source["threshold"] = opts.threshold ? nlohmann::json(*opts.threshold)
                                         : nlohmann::json(nullptr);
    std::cerr << "read " << ingested->rows_read << " rows, dropped "
              << ingested->rows_dropped << " with missing values\n";
    return std::move(ingested->data);
  }
  if (opts.simulate.empty()) {
    return absl::InvalidArgumentError("give --input or --simulate");
  }
  if (horizon < 1) {
    return absl::InvalidArgumentError("simulated data needs --T");
  }
  auto kind = ParseSimulationKind(opts.simulate);
  if (!kind.ok()) return kind.status();
  SimulationSpec spec;
  spec.kind = *kind;
  spec.p = opts.p;
  Rng rng = Rng(seed).Fork(kDataStream);
  source = SimulationToJson(spec);
  source["n"] = opts.n;
  source["T"] = horizon;
  return SimulateDataset(spec, opts.n, horizon, rng);
}

absl::StatusOr<std::vector<QuerySpec>> LoadQueries(const std::string& arg,
                                                   int horizon) {
  if (arg.empty()) return std::vector<QuerySpec>{};
  if (arg == "quarterly") return QuarterlyQueries(horizon);
  nlohmann::json list;
  try {
    if (!arg.empty() && (arg.front() == '[' || arg.front() == '{')) {
      list = nlohmann::json::parse(arg);
    } else {
      std::ifstream in(arg);
      if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", arg));
      list = nlohmann::json::parse(in);
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad query JSON: ", e.what()));
  }
  return ParseQueries(list);
}

struct SynthOptions {
  DataOptions data;
  int horizon = 0;
  int k = 3;
  double rho = 0.005;
  double beta_target = 0.05;
  std::optional<int64_t> n_pad;
  int reps = 1;
  uint64_t seed = 0;
  std::string out = "longsynth_out";
  std::string queries;
  bool noiseless = false;
  bool force_window = false;
  int threads = 0;
  bool emit_synthetic = false;
  double accuracy_beta = 0.05;
};

void AddSynthOptions(CLI::App* app, SynthOptions& o, bool window) {
  AddDataOptions(app, o.data);
  app->add_option("--T", o.horizon, "Horizon (default: all rounds of data)");
  if (window) {
    app->add_option("--k", o.k, "Window length")->capture_default_str();
    app->add_option("--beta-target", o.beta_target,
                    "Target padding failure probability")
        ->capture_default_str();
    app->add_option("--n-pad", o.n_pad, "Override padding per bin");
  }
  app->add_option("--rho", o.rho, "zCDP budget")->capture_default_str();
  app->add_option("--reps", o.reps, "Repetitions")->capture_default_str();
  app->add_option("--seed", o.seed, "Base seed")->capture_default_str();
  app->add_option("--out", o.out, "Output directory")->capture_default_str();
  app->add_option("--queries", o.queries,
                  "JSON query list (file or inline), or 'quarterly'");
  app->add_flag("--noiseless", o.noiseless, "No noise, no privacy");
  app->add_flag("--force-window", o.force_window,
                "Answer unsupported queries, tagged as such");
  app->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  app->add_flag("--emit-synthetic", o.emit_synthetic,
                "Write repetition 0's records to synthetic.csv");
  app->add_option("--accuracy-beta", o.accuracy_beta,
                  "Failure probability of the reported error bounds")
      ->capture_default_str();
}

int RunSynth(const SynthOptions& o, RunManifest::Mode mode) {
  nlohmann::json source;
  auto data = LoadData(o.data, o.horizon, o.seed, source);
  if (!data.ok()) return Report(data.status());
  RunManifest m;
  m.mode = mode;
  m.data_source = source;
  m.horizon = o.horizon > 0 ? o.horizon : data->rounds();
  m.k = o.k;
  m.rho = o.rho;
  m.beta_target = o.beta_target;
  m.n_pad = o.n_pad;
  m.repetitions = o.reps;
  m.seed = o.seed;
  m.noiseless = o.noiseless;
  m.force_window = o.force_window;
  m.threads = o.threads;
  m.emit_synthetic = o.emit_synthetic;
  m.accuracy_beta = o.accuracy_beta;
  auto queries = LoadQueries(o.queries, m.horizon);
  if (!queries.ok()) return Report(queries.status());
  m.queries = *queries;

  auto result = RunExperiment(m, *data);
  if (!result.ok()) return Report(result.status());
  if (absl::Status s = WriteExperiment(*result, o.out); !s.ok()) {
    return Report(s);
  }
  std::cerr << result->n_ok << "/" << m.repetitions
            << " repetitions succeeded; results in " << o.out << "\n";
  for (const QuerySummary& s : result->summaries) {
    if (!s.supported && s.n_ok == 0) {
      std::cerr << "refused " << s.label << " t=" << s.t << ": " << s.note
                << "\n";
    }
  }
  return result->n_ok == 0 ? kExitAllFailed : kExitOk;
}

struct SimulateOptions {
  std::string kind = "all_ones";
  int64_t n = 25000;
  int horizon = 12;
  double p = 0.5;
  uint64_t seed = 0;
  std::string out;
};

int RunSimulate(const SimulateOptions& o) {
  auto kind = ParseSimulationKind(o.kind);
  if (!kind.ok()) return Report(kind.status());
  SimulationSpec spec;
  spec.kind = *kind;
  spec.p = o.p;
  Rng rng(o.seed);
  auto data = SimulateDataset(spec, o.n, o.horizon, rng);
  if (!data.ok()) return Report(data.status());
  if (absl::Status s = WriteBitCsv(*data, o.out); !s.ok()) return Report(s);
  return kExitOk;
}

struct EvalOptions {
  std::string synthetic;
  DataOptions truth;
  std::string metadata;
  std::string queries;
  bool force_window = false;
  std::string out;
};

// Release description from a metadata.json written by a synth run.
absl::StatusOr<ReleaseInfo> ReleaseFromMetadata(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(in);
    if (meta.value("schema", 0) != 1) {
      return absl::InvalidArgumentError("metadata schema must be 1");
    }
    ReleaseInfo release;
    release.n = meta.at("n").get<int64_t>();
    if (meta.at("mode").get<std::string>() == "window") {
      release.kind = ReleaseInfo::Kind::kWindow;
      release.k = meta.at("k").get<int>();
      release.n_pad = meta.at("n_pad").get<int64_t>();
    } else {
      release.kind = ReleaseInfo::Kind::kCumulative;
    }
    return release;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad metadata ", path, ": ", e.what()));
  }
}

int RunEval(const EvalOptions& o) {
  auto ingested = IngestCsv(o.synthetic, CsvOptions{});
  if (!ingested.ok()) return Report(ingested.status());
  SyntheticStore store(ingested->data.population());
  for (int t = 1; t <= ingested->data.rounds(); ++t) {
    auto col = ingested->data.column(t);
    if (absl::Status s = store.Append({col.begin(), col.end()}); !s.ok()) {
      return Report(s);
    }
  }
  std::optional<LongitudinalDataset> truth;
  if (!o.truth.input.empty()) {
    nlohmann::json ignored;
    auto data = LoadData(o.truth, 0, 0, ignored);
    if (!data.ok()) return Report(data.status());
    truth = *std::move(data);
  }
  // Without metadata the store is read as-is: every query supported, no
  // padding removed.
  ReleaseInfo release{ReleaseInfo::Kind::kWindow, kMaxWindow, 0,
                      static_cast<int64_t>(store.m())};
  if (!o.metadata.empty()) {
    auto r = ReleaseFromMetadata(o.metadata);
    if (!r.ok()) return Report(r.status());
    release = *r;
  }
  auto queries = LoadQueries(o.queries, store.rounds());
  if (!queries.ok()) return Report(queries.status());
  if (queries->empty()) {
    return Report(absl::InvalidArgumentError("eval needs --queries"));
  }

  std::ostringstream csv;
  csv << "query,t,value,raw,unsupported" << (truth ? ",truth" : "") << "\n";
  for (const QuerySpec& q : *queries) {
    auto answer = EvalSynthetic(store, q, release, o.force_window);
    if (!answer.ok()) return Report(answer.status());
    csv << QueryLabel(q) << "," << QueryRound(q) << ","
        << FormatDouble(answer->value) << "," << FormatDouble(answer->raw)
        << "," << (answer->unsupported ? 1 : 0);
    if (truth) {
      auto exact = EvalQuery(*truth, q);
      if (!exact.ok()) return Report(exact.status());
      csv << "," << FormatDouble(*exact);
    }
    csv << "\n";
  }
  if (o.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(o.out, std::ios::binary);
    if (!out) {
      return Report(absl::PermissionDeniedError(
          absl::StrCat("cannot write ", o.out)));
    }
    out << csv.str();
  }
  return kExitOk;
}

struct BoundOptions {
  std::string mode = "window";
  int horizon = 12;
  int k = 3;
  double rho = 0.005;
  double beta_target = 0.05;
  double beta = 0.05;
  int64_t n = 0;
};

int RunBound(const BoundOptions& o) {
  auto rho = PrivacyBudget::Create(o.rho);
  if (!rho.ok()) return Report(rho.status());
  nlohmann::json out;
  out["mode"] = o.mode;
  out["T"] = o.horizon;
  out["rho"] = o.rho;
  auto eps = ZcdpToApproxDp(*rho, kReportDelta);
  if (!eps.ok()) return Report(eps.status());
  out["epsilon"] = *eps;
  out["delta"] = kReportDelta;
  if (o.mode == "window") {
    out["k"] = o.k;
    out["beta_target"] = o.beta_target;
    out["beta"] = o.beta;
    auto n_pad = ComputeNPad(o.horizon, o.k, *rho, o.beta_target);
    if (!n_pad.ok()) return Report(n_pad.status());
    auto additive = ComputeErrorBound(o.horizon, o.k, *rho, o.beta);
    if (!additive.ok()) return Report(additive.status());
    auto noise = NoiseScale::ForBudget(o.horizon - o.k + 1, *rho);
    if (!noise.ok()) return Report(noise.status());
    out["n_pad"] = *n_pad;
    out["sigma2"] = noise->value();
    out["additive_bound"] = *additive;
    if (o.n > 0) {
      out["n"] = o.n;
      out["debiased_relative_bound"] = *additive / static_cast<double>(o.n);
    }
  } else if (o.mode == "cumulative") {
    if (o.n <= 0) {
      return Report(absl::InvalidArgumentError("cumulative bound needs --n"));
    }
    CumulativeSynthConfig cfg;
    cfg.horizon = o.horizon;
    cfg.rho = *rho;
    auto acc = AccuracyOf(cfg, o.n, o.beta);
    if (!acc.ok()) return Report(acc.status());
    out["n"] = o.n;
    out["beta"] = o.beta;
    out["alpha"] = acc->alpha;
    out["beta_star"] = acc->beta;
  } else {
    return Report(absl::InvalidArgumentError(
        absl::StrCat("unknown mode '", o.mode, "'")));
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

}  // namespace
}  // namespace longsynth

int main(int argc, char** argv) {
  using namespace longsynth;
  CLI::App app{"Continual differentially private synthetic data for "
               "longitudinal bit streams"};
  app.require_subcommand(1);

  SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Write a simulated panel");
  simulate->add_option("--kind", sim.kind,
                       "all_ones, bernoulli, from_seed, sipp_like")
      ->capture_default_str();
  simulate->add_option("--n", sim.n, "Population size")->capture_default_str();
  simulate->add_option("--T", sim.horizon, "Rounds")->capture_default_str();
  simulate->add_option("--p", sim.p, "Bernoulli rate")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Seed")->capture_default_str();
  simulate->add_option("--out", sim.out, "Output CSV")->required();

  SynthOptions window_opts;
  CLI::App* window = app.add_subcommand(
      "synth-window", "Repeated fixed-window synthesis");
  AddSynthOptions(window, window_opts, /*window=*/true);

  SynthOptions cumulative_opts;
  CLI::App* cumulative = app.add_subcommand(
      "synth-cumulative", "Repeated cumulative-threshold synthesis");
  AddSynthOptions(cumulative, cumulative_opts, /*window=*/false);

  EvalOptions eval_opts;
  CLI::App* eval = app.add_subcommand(
      "eval", "Answer queries on released synthetic records");
  eval->add_option("--synthetic", eval_opts.synthetic, "Synthetic CSV")
      ->required();
  eval->add_option("--input", eval_opts.truth.input,
                   "Ground-truth CSV for a truth column");
  eval->add_flag("--header", eval_opts.truth.header,
                 "Ground-truth CSV has a header");
  eval->add_option("--threshold", eval_opts.truth.threshold,
                   "Binarize ground truth: value < threshold becomes 1");
  eval->add_option("--metadata", eval_opts.metadata,
                   "metadata.json of the release, for debiasing");
  eval->add_option("--queries", eval_opts.queries,
                   "JSON query list (file or inline), or 'quarterly'")
      ->required();
  eval->add_flag("--force-window", eval_opts.force_window,
                 "Answer unsupported queries, tagged as such");
  eval->add_option("--out", eval_opts.out, "Output CSV (default stdout)");

  BoundOptions bound_opts;
  CLI::App* bound = app.add_subcommand(
      "bound", "Print padding, noise and accuracy bounds");
  bound->add_option("--mode", bound_opts.mode, "window or cumulative")
      ->capture_default_str();
  bound->add_option("--T", bound_opts.horizon, "Horizon")->capture_default_str();
  bound->add_option("--k", bound_opts.k, "Window length")->capture_default_str();
  bound->add_option("--rho", bound_opts.rho, "zCDP budget")
      ->capture_default_str();
  bound->add_option("--beta-target", bound_opts.beta_target,
                    "Padding failure probability")
      ->capture_default_str();
  bound->add_option("--beta", bound_opts.beta, "Bound failure probability")
      ->capture_default_str();
  bound->add_option("--n", bound_opts.n, "Population size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (*simulate) return RunSimulate(sim);
  if (*window) return RunSynth(window_opts, RunManifest::Mode::kWindow);
  if (*cumulative) {
    return RunSynth(cumulative_opts, RunManifest::Mode::kCumulative);
  }
  if (*eval) return RunEval(eval_opts);
  if (*bound) return RunBound(bound_opts);
  return kExitInput;
}
