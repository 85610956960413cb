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

#include "longsynth/harness/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "absl/strings/str_cat.h"
#include "longsynth/cumulative_synth.h"
#include "longsynth/harness/csv_io.h"
#include "longsynth/privacy.h"
#include "longsynth/rng.h"

namespace longsynth {
namespace {

using Mode = RunManifest::Mode;

absl::Status ValidateManifest(const RunManifest& m,
                              const LongitudinalDataset& data) {
  if (m.horizon < 1) return absl::InvalidArgumentError("T must be at least 1");
  if (m.horizon > data.rounds()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "T = ", m.horizon, " exceeds the ", data.rounds(), " rounds of data"));
  }
  if (data.population() == 0) {
    return absl::InvalidArgumentError("dataset is empty");
  }
  if (m.repetitions < 1) {
    return absl::InvalidArgumentError("repetitions must be at least 1");
  }
  if (!(m.rho >= 0) || !std::isfinite(m.rho)) {
    return absl::InvalidArgumentError("rho must be a non-negative number");
  }
  if (!m.noiseless && m.rho == 0) {
    return absl::InvalidArgumentError(
        "rho must be positive unless the run is noiseless");
  }
  if (!(m.accuracy_beta > 0 && m.accuracy_beta < 1)) {
    return absl::InvalidArgumentError("accuracy beta must lie in (0, 1)");
  }
  return absl::OkStatus();
}

absl::StatusOr<WindowSynthConfig> WindowConfig(const RunManifest& m) {
  WindowSynthConfig cfg;
  cfg.horizon = m.horizon;
  cfg.k = m.k;
  auto rho = PrivacyBudget::Create(m.rho);
  if (!rho.ok()) return rho.status();
  cfg.rho = *rho;
  cfg.beta_target = m.beta_target;
  cfg.n_pad_override = m.n_pad;
  cfg.noiseless = m.noiseless;
  return cfg;
}

absl::StatusOr<CumulativeSynthConfig> CumulativeConfig(const RunManifest& m) {
  CumulativeSynthConfig cfg;
  cfg.horizon = m.horizon;
  auto rho = PrivacyBudget::Create(m.rho);
  if (!rho.ok()) return rho.status();
  cfg.rho = *rho;
  cfg.noiseless = m.noiseless;
  return cfg;
}

// Query support and truth are fixed by the manifest, so they are decided
// once.
struct QueryPlan {
  std::vector<double> truth;
  std::vector<std::string> refusal;  // empty when supported
};

absl::StatusOr<QueryPlan> PlanQueries(const RunManifest& m,
                                      const std::vector<QuerySpec>& queries,
                                      const LongitudinalDataset& data,
                                      const ReleaseInfo& release) {
  QueryPlan plan;
  // Probe support on an empty store with the right shape.
  SyntheticStore probe(1);
  for (int t = 1; t <= m.horizon; ++t) {
    if (absl::Status s = probe.Append({0}); !s.ok()) return s;
  }
  for (const QuerySpec& q : queries) {
    if (QueryRound(q) > m.horizon) {
      return absl::InvalidArgumentError(absl::StrCat(
          QueryLabel(q), " asks for round ", QueryRound(q), " beyond T = ",
          m.horizon));
    }
    auto truth = EvalQuery(data, q);
    if (!truth.ok()) return truth.status();
    plan.truth.push_back(*truth);
    auto probed = EvalSynthetic(probe, q, release, m.force_window);
    if (absl::IsFailedPrecondition(probed.status())) {
      plan.refusal.emplace_back(probed.status().message());
    } else if (!probed.ok()) {
      return probed.status();
    } else {
      plan.refusal.emplace_back();
    }
  }
  return plan;
}

void AnswerQueries(const SyntheticStore& store,
                   const std::vector<QuerySpec>& queries,
                   const QueryPlan& plan, const ReleaseInfo& release,
                   bool force, RepetitionResult& rep) {
  rep.answers.assign(queries.size(), std::nullopt);
  for (std::size_t j = 0; j < queries.size(); ++j) {
    if (!plan.refusal[j].empty()) continue;
    auto answer = EvalSynthetic(store, queries[j], release, force);
    if (answer.ok()) rep.answers[j] = *answer;
  }
}

void RunWindowRepetition(const RunManifest& m, const WindowSynthConfig& cfg,
                         const LongitudinalDataset& data,
                         const std::vector<QuerySpec>& queries,
                         const QueryPlan& plan, const ReleaseInfo& release,
                         RepetitionResult& rep,
                         std::optional<SyntheticStore>* keep) {
  auto synth = WindowSynthesizer::Create(cfg);
  if (!synth.ok()) {
    rep.status = synth.status();
    return;
  }
  Rng rng(rep.seed);
  rep.status = synth->Run(data, rng);
  rep.failure = synth->failure();
  rep.min_margin = synth->min_margin();
  if (synth->round() >= cfg.k) {
    WindowReportConfig report_cfg{m.horizon, m.k, cfg.rho, m.accuracy_beta,
                                  synth->n_pad()};
    auto report = MaxErrorReport(data, synth->store(), report_cfg);
    if (report.ok()) {
      for (const RoundErrors& r : report->rounds) {
        rep.rounds.push_back(
            {r.t, r.max_additive, r.max_debiased_rel, r.max_raw_rel, 0});
      }
      rep.max_additive = report->max_additive;
      rep.max_debiased_rel = report->max_debiased_rel;
      rep.max_raw_rel = report->max_raw_rel;
    }
  }
  if (!rep.status.ok()) return;
  AnswerQueries(synth->store(), queries, plan, release, m.force_window, rep);
  if (keep != nullptr) *keep = synth->store();
}

void RunCumulativeRepetition(const RunManifest& m,
                             const CumulativeSynthConfig& cfg,
                             const LongitudinalDataset& data,
                             const std::vector<QuerySpec>& queries,
                             const QueryPlan& plan, const ReleaseInfo& release,
                             RepetitionResult& rep,
                             std::optional<SyntheticStore>* keep) {
  auto synth = CumulativeSynthesizer::Create(
      static_cast<int64_t>(data.population()), cfg);
  if (!synth.ok()) {
    rep.status = synth.status();
    return;
  }
  Rng rng(rep.seed);
  rep.status = synth->Run(data, rng);
  const auto n = static_cast<double>(data.population());
  for (int t = 1; t <= synth->round(); ++t) {
    auto truth = TrueCumulativeCounts(data, t);
    if (!truth.ok()) break;
    RoundError round{t, 0, 0, 0, 0};
    for (int b = 1; b <= t; ++b) {
      const int64_t exact = (*truth)[b];
      round.additive = std::max(
          round.additive, std::abs(*synth->bank().value(b, t) - exact));
      round.counter_additive =
          std::max(round.counter_additive,
                   std::abs(*synth->bank().noisy(b, t) - exact));
    }
    round.debiased_rel = static_cast<double>(round.additive) / n;
    round.raw_rel = round.debiased_rel;
    rep.max_additive = std::max(rep.max_additive, round.additive);
    rep.max_counter_additive =
        std::max(rep.max_counter_additive, round.counter_additive);
    rep.rounds.push_back(round);
  }
  rep.max_debiased_rel = static_cast<double>(rep.max_additive) / n;
  rep.max_raw_rel = rep.max_debiased_rel;
  if (!rep.status.ok()) return;
  AnswerQueries(synth->store(), queries, plan, release, m.force_window, rep);
  if (keep != nullptr) *keep = synth->store();
}

QuerySummary Summarize(const QuerySpec& q, double truth,
                       const std::string& refusal,
                       const std::vector<RepetitionResult>& reps,
                       std::size_t j) {
  QuerySummary s;
  s.label = QueryLabel(q);
  s.t = QueryRound(q);
  s.truth = truth;
  s.supported = refusal.empty();
  s.note = refusal;
  std::vector<double> values;
  std::vector<double> errors;
  bool forced = false;
  for (const RepetitionResult& rep : reps) {
    if (j >= rep.answers.size() || !rep.answers[j]) continue;
    values.push_back(rep.answers[j]->value);
    errors.push_back(std::fabs(rep.answers[j]->value - truth));
    forced = forced || rep.answers[j]->unsupported;
  }
  if (forced) {
    s.supported = false;
    s.note = "forced";
  }
  s.n_ok = static_cast<int>(values.size());
  if (values.empty()) {
    const double nan = std::nan("");
    s.mean = s.std = s.p2_5 = s.median = s.p97_5 = nan;
    s.err_median = s.err_p2_5 = s.err_p97_5 = s.err_max = nan;
    return s;
  }
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double ss = 0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = values.size() > 1
              ? std::sqrt(ss / static_cast<double>(values.size() - 1))
              : 0.0;
  std::sort(values.begin(), values.end());
  std::sort(errors.begin(), errors.end());
  s.p2_5 = Quantile(values, 0.025);
  s.median = Quantile(values, 0.5);
  s.p97_5 = Quantile(values, 0.975);
  s.err_p2_5 = Quantile(errors, 0.025);
  s.err_median = Quantile(errors, 0.5);
  s.err_p97_5 = Quantile(errors, 0.975);
  s.err_max = errors.back();
  return s;
}

nlohmann::json NoiseJson(const NoiseScale& noise) {
  return {{"sigma2", noise.value()},
          {"sigma2_num", noise.sigma2().num},
          {"sigma2_den", noise.sigma2().den}};
}

absl::StatusOr<nlohmann::json> BuildMetadata(
    const RunManifest& m, const LongitudinalDataset& data,
    const std::vector<QuerySpec>& queries, const ExperimentResult& result) {
  nlohmann::json meta;
  meta["schema"] = 1;
  meta["tool"] = "longsynth";
  meta["mode"] = ModeName(m.mode);
  meta["data"] = m.data_source;
  nlohmann::json params;
  params["T"] = m.horizon;
  if (m.mode == Mode::kWindow) params["k"] = m.k;
  params["rho"] = m.rho;
  params["beta_target"] = m.beta_target;
  params["n_pad_override"] =
      m.n_pad ? nlohmann::json(*m.n_pad) : nlohmann::json(nullptr);
  params["repetitions"] = m.repetitions;
  params["seed"] = m.seed;
  params["noiseless"] = m.noiseless;
  params["force_window"] = m.force_window;
  params["accuracy_beta"] = m.accuracy_beta;
  meta["parameters"] = params;
  meta["n"] = data.population();

  const PrivacyBudget rho = *PrivacyBudget::Create(m.rho);
  nlohmann::json privacy;
  privacy["rho"] = m.rho;
  auto eps = ZcdpToApproxDp(m.noiseless ? PrivacyBudget::Zero() : rho,
                            kReportDelta);
  if (!eps.ok()) return eps.status();
  privacy["delta"] = kReportDelta;
  privacy["epsilon"] = m.noiseless ? nlohmann::json(nullptr)
                                   : nlohmann::json(*eps);
  if (m.noiseless) privacy["note"] = "noiseless run, no privacy";

  const int n_failed = m.repetitions - result.n_ok;
  nlohmann::json failures;
  failures["count"] = n_failed;
  failures["rate"] =
      static_cast<double>(n_failed) / static_cast<double>(m.repetitions);

  if (m.mode == Mode::kWindow) {
    auto cfg = WindowConfig(m);
    if (!cfg.ok()) return cfg.status();
    auto synth = WindowSynthesizer::Create(*cfg);
    if (!synth.ok()) return synth.status();
    meta["k"] = m.k;
    meta["n_pad"] = synth->n_pad();
    meta["m"] = static_cast<int64_t>(data.population()) +
                (int64_t{1} << m.k) * synth->n_pad();
    meta["noise"] = NoiseJson(synth->noise());
    privacy["per_step_rho"] = synth->per_step_rho();
    privacy["steps"] = m.horizon - m.k + 1;
    nlohmann::json bounds;
    if (!m.noiseless) {
      auto additive = ComputeErrorBound(m.horizon, m.k, rho, m.accuracy_beta);
      if (!additive.ok()) return additive.status();
      bounds["beta"] = m.accuracy_beta;
      bounds["additive"] = *additive;
      bounds["debiased_relative"] =
          *additive / static_cast<double>(data.population());
      double max_frac = 0;
      for (int t = m.k; t <= m.horizon; ++t) {
        auto hist = TrueSuffixHistogram(data, m.k, t);
        if (!hist.ok()) return hist.status();
        for (int64_t c : hist->counts()) {
          max_frac = std::max(
              max_frac,
              static_cast<double>(c) / static_cast<double>(data.population()));
        }
      }
      auto relative = ComputeRelativeErrorBound(
          m.horizon, m.k, rho, m.accuracy_beta,
          static_cast<int64_t>(data.population()), max_frac);
      if (!relative.ok()) return relative.status();
      bounds["raw_relative"] = *relative;
      bounds["raw_relative_at_fraction"] = max_frac;
    }
    meta["bounds"] = bounds;
    failures["predicted_rate_at_most"] =
        m.noiseless || m.n_pad ? nlohmann::json(nullptr)
                               : nlohmann::json(m.beta_target);
  } else {
    auto cfg = CumulativeConfig(m);
    if (!cfg.ok()) return cfg.status();
    auto synth = CumulativeSynthesizer::Create(
        static_cast<int64_t>(data.population()), *cfg);
    if (!synth.ok()) return synth.status();
    meta["m"] = data.population();
    meta["counter"] = CounterKindName(cfg->counter_kind);
    nlohmann::json schedule = nlohmann::json::array();
    for (int b = 1; b <= m.horizon; ++b) {
      nlohmann::json entry{{"b", b},
                           {"rho", synth->schedule().per_unit()[b - 1]},
                           {"horizon", m.horizon - b + 1}};
      if (const auto* tree =
              dynamic_cast<const TreeCounter*>(&synth->counter(b))) {
        entry["noise"] = NoiseJson(tree->noise());
      }
      schedule.push_back(entry);
    }
    meta["schedule"] = schedule;
    nlohmann::json bounds;
    if (!m.noiseless) {
      auto acc = AccuracyOf(*cfg, static_cast<int64_t>(data.population()),
                            m.accuracy_beta);
      if (!acc.ok()) return acc.status();
      bounds["beta"] = m.accuracy_beta;
      bounds["alpha"] = acc->alpha;
      bounds["beta_star"] = acc->beta;
    }
    meta["bounds"] = bounds;
    failures["predicted_rate_at_most"] = 0;
  }
  meta["privacy"] = privacy;
  meta["failures"] = failures;
  meta["n_ok"] = result.n_ok;

  nlohmann::json seeds = nlohmann::json::array();
  for (const RepetitionResult& rep : result.repetitions) seeds.push_back(rep.seed);
  meta["repetition_seeds"] = seeds;
  nlohmann::json qs = nlohmann::json::array();
  for (const QuerySpec& q : queries) qs.push_back(QueryToJson(q));
  meta["queries"] = qs;
  return meta;
}

absl::Status WriteText(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write ", path.string()));
  }
  out << text;
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path.string()));
  return absl::OkStatus();
}

std::string CsvQuote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string ModeName(RunManifest::Mode mode) {
  return mode == Mode::kWindow ? "window" : "cumulative";
}

std::vector<QuerySpec> DefaultQueries(RunManifest::Mode mode, int horizon,
                                      int k) {
  std::vector<QuerySpec> out;
  if (mode == Mode::kWindow) {
    for (int t = k; t <= horizon; ++t) {
      for (uint32_t s = 0; s < (uint32_t{1} << k); ++s) {
        out.push_back(WindowQuery{SuffixKey(k, s), t});
      }
    }
  } else {
    for (int t = 1; t <= horizon; ++t) {
      for (int b = 1; b <= t; ++b) out.push_back(CumulativeQuery{b, t});
    }
  }
  return out;
}

std::vector<QuerySpec> QuarterlyQueries(int horizon) {
  struct Pattern {
    const char* name;
    int min_ones;
    bool consecutive;
  };
  const Pattern patterns[] = {{"at_least_one", 1, false},
                              {"at_least_two", 2, false},
                              {"two_consecutive", 2, true},
                              {"all_three", 3, false}};
  std::vector<QuerySpec> out;
  for (int t = 3; t <= horizon; t += 3) {
    for (const Pattern& p : patterns) {
      LinearQuery q{3, t, std::vector<double>(8, 0.0),
                    absl::StrCat(p.name, "_q", t / 3)};
      for (uint32_t s = 0; s < 8; ++s) {
        const int ones = SuffixKey(3, s).Weight();
        const bool adjacent = (s & 0b110) == 0b110 || (s & 0b011) == 0b011;
        if (p.consecutive ? adjacent : ones >= p.min_ones) q.weights[s] = 1;
      }
      out.push_back(std::move(q));
    }
  }
  return out;
}

double Quantile(const std::vector<double>& sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

absl::StatusOr<ExperimentResult> RunExperiment(
    const RunManifest& manifest, const LongitudinalDataset& data) {
  const auto start = std::chrono::steady_clock::now();
  if (absl::Status s = ValidateManifest(manifest, data); !s.ok()) return s;

  ExperimentResult result;
  result.queries = manifest.queries.empty()
                       ? DefaultQueries(manifest.mode, manifest.horizon,
                                        manifest.k)
                       : manifest.queries;

  ReleaseInfo release;
  release.n = static_cast<int64_t>(data.population());
  std::optional<WindowSynthConfig> window_cfg;
  std::optional<CumulativeSynthConfig> cumulative_cfg;
  if (manifest.mode == Mode::kWindow) {
    auto cfg = WindowConfig(manifest);
    if (!cfg.ok()) return cfg.status();
    auto probe = WindowSynthesizer::Create(*cfg);
    if (!probe.ok()) return probe.status();
    window_cfg = *cfg;
    release.kind = ReleaseInfo::Kind::kWindow;
    release.k = manifest.k;
    release.n_pad = probe->n_pad();
  } else {
    auto cfg = CumulativeConfig(manifest);
    if (!cfg.ok()) return cfg.status();
    auto probe = CumulativeSynthesizer::Create(release.n, *cfg);
    if (!probe.ok()) return probe.status();
    cumulative_cfg = *cfg;
    release.kind = ReleaseInfo::Kind::kCumulative;
  }

  auto plan = PlanQueries(manifest, result.queries, data, release);
  if (!plan.ok()) return plan.status();
  result.truth = plan->truth;

  const int reps = manifest.repetitions;
  result.repetitions.resize(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    result.repetitions[r].repetition = r;
    result.repetitions[r].seed =
        DeriveSeed(manifest.seed, static_cast<uint64_t>(r));
  }

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) {
      RepetitionResult& rep = result.repetitions[r];
      std::optional<SyntheticStore>* keep =
          (r == 0 && manifest.emit_synthetic) ? &result.synthetic : nullptr;
      if (window_cfg) {
        RunWindowRepetition(manifest, *window_cfg, data, result.queries, *plan,
                            release, rep, keep);
      } else {
        RunCumulativeRepetition(manifest, *cumulative_cfg, data,
                                result.queries, *plan, release, rep, keep);
      }
    }
  };
  int threads = manifest.threads > 0
                    ? manifest.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, reps);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  for (const RepetitionResult& rep : result.repetitions) {
    if (rep.status.ok()) ++result.n_ok;
  }
  for (std::size_t j = 0; j < result.queries.size(); ++j) {
    result.summaries.push_back(Summarize(result.queries[j], result.truth[j],
                                         plan->refusal[j], result.repetitions,
                                         j));
  }
  auto meta = BuildMetadata(manifest, data, result.queries, result);
  if (!meta.ok()) return meta.status();
  result.metadata = *std::move(meta);
  result.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return result;
}

absl::Status WriteExperiment(const ExperimentResult& result,
                             const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create ", out_dir, ": ", ec.message()));
  }
  const fs::path dir(out_dir);

  std::string answers = "query,t,repetition,value,raw,unsupported\n";
  for (const RepetitionResult& rep : result.repetitions) {
    for (std::size_t j = 0; j < rep.answers.size(); ++j) {
      if (!rep.answers[j]) continue;
      const QueryAnswer& a = *rep.answers[j];
      absl::StrAppend(&answers, CsvQuote(QueryLabel(result.queries[j])), ",",
                      QueryRound(result.queries[j]), ",", rep.repetition, ",",
                      FormatDouble(a.value), ",", FormatDouble(a.raw), ",",
                      a.unsupported ? 1 : 0, "\n");
    }
  }
  if (absl::Status s = WriteText(dir / "answers.csv", answers); !s.ok()) {
    return s;
  }

  std::string summary =
      "query,t,truth,supported,n_ok,mean,std,p2_5,median,p97_5,"
      "err_p2_5,err_median,err_p97_5,err_max,note\n";
  for (const QuerySummary& s : result.summaries) {
    absl::StrAppend(&summary, CsvQuote(s.label), ",", s.t, ",",
                    FormatDouble(s.truth), ",", s.supported ? 1 : 0, ",",
                    s.n_ok, ",", FormatDouble(s.mean), ",",
                    FormatDouble(s.std), ",", FormatDouble(s.p2_5), ",",
                    FormatDouble(s.median), ",", FormatDouble(s.p97_5), ",",
                    FormatDouble(s.err_p2_5), ",", FormatDouble(s.err_median),
                    ",", FormatDouble(s.err_p97_5), ",",
                    FormatDouble(s.err_max), ",", CsvQuote(s.note), "\n");
  }
  if (absl::Status s = WriteText(dir / "summary.csv", summary); !s.ok()) {
    return s;
  }

  std::string reps =
      "repetition,seed,ok,max_additive,max_debiased_rel,max_raw_rel,"
      "max_counter_additive,min_margin\n";
  std::string rounds =
      "repetition,t,max_additive,max_debiased_rel,max_raw_rel,"
      "max_counter_additive\n";
  std::string failures = "repetition,seed,t,key,value,status\n";
  for (const RepetitionResult& rep : result.repetitions) {
    absl::StrAppend(&reps, rep.repetition, ",", rep.seed, ",",
                    rep.status.ok() ? 1 : 0, ",", rep.max_additive, ",",
                    FormatDouble(rep.max_debiased_rel), ",",
                    FormatDouble(rep.max_raw_rel), ",",
                    rep.max_counter_additive, ",", rep.min_margin, "\n");
    for (const RoundError& r : rep.rounds) {
      absl::StrAppend(&rounds, rep.repetition, ",", r.t, ",", r.additive, ",",
                      FormatDouble(r.debiased_rel), ",",
                      FormatDouble(r.raw_rel), ",", r.counter_additive, "\n");
    }
    if (!rep.status.ok()) {
      absl::StrAppend(&failures, rep.repetition, ",", rep.seed, ",",
                      rep.failure ? rep.failure->t : 0, ",",
                      rep.failure ? rep.failure->key : "", ",",
                      rep.failure ? rep.failure->value : 0, ",",
                      CsvQuote(absl::StatusCodeToString(rep.status.code())),
                      "\n");
    }
  }
  if (absl::Status s = WriteText(dir / "repetitions.csv", reps); !s.ok()) {
    return s;
  }
  if (absl::Status s = WriteText(dir / "round_errors.csv", rounds); !s.ok()) {
    return s;
  }
  if (absl::Status s = WriteText(dir / "failures.csv", failures); !s.ok()) {
    return s;
  }
  if (absl::Status s = WriteText(dir / "metadata.json",
                                 result.metadata.dump(2) + "\n");
      !s.ok()) {
    return s;
  }
  nlohmann::json timing{{"wall_seconds", result.wall_seconds}};
  if (absl::Status s = WriteText(dir / "timing.json", timing.dump(2) + "\n");
      !s.ok()) {
    return s;
  }
  if (result.synthetic) {
    return WriteBitCsv(*result.synthetic, (dir / "synthetic.csv").string());
  }
  return absl::OkStatus();
}

}  // namespace longsynth
