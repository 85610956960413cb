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

#include "longsynth/query.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>

#include "absl/strings/str_cat.h"
#include "longsynth/window_synth.h"

namespace longsynth {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

// Weight the query gives to an individual whose last QueryWindow(q) bits
// read `pattern` (oldest bit most significant).
double PatternWeight(const QuerySpec& q, uint32_t pattern) {
  return std::visit(
      Overloaded{
          [&](const WindowQuery& w) { return pattern == w.s.code() ? 1.0 : 0.0; },
          [&](const CumulativeQuery& c) {
            return std::popcount(pattern) >= c.b ? 1.0 : 0.0;
          },
          [&](const LinearQuery& l) { return l.weights[pattern]; },
      },
      q);
}

absl::Status CheckRound(const BitPanel& data, const QuerySpec& q) {
  const int t = QueryRound(q);
  if (t > data.rounds()) {
    return absl::OutOfRangeError(absl::StrCat(
        "query ", QueryLabel(q), " asks round ", t, " but only ",
        data.rounds(), " rounds are available"));
  }
  return absl::OkStatus();
}

absl::StatusOr<nlohmann::json> Field(const nlohmann::json& item,
                                     const char* name) {
  if (!item.contains(name)) {
    return absl::InvalidArgumentError(
        absl::StrCat("query ", item.dump(), " is missing '", name, "'"));
  }
  return item.at(name);
}

absl::StatusOr<int> IntField(const nlohmann::json& item, const char* name) {
  auto v = Field(item, name);
  if (!v.ok()) return v.status();
  if (!v->is_number_integer()) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", name, "' must be an integer in ", item.dump()));
  }
  return v->get<int>();
}

}  // namespace

int QueryRound(const QuerySpec& q) {
  return std::visit([](const auto& v) { return v.t; }, q);
}

int QueryWindow(const QuerySpec& q) {
  return std::visit(Overloaded{
                        [](const WindowQuery& w) { return w.s.k(); },
                        [](const CumulativeQuery& c) { return c.t; },
                        [](const LinearQuery& l) { return l.k; },
                    },
                    q);
}

std::string QueryLabel(const QuerySpec& q) {
  return std::visit(
      Overloaded{
          [](const WindowQuery& w) { return "window:" + w.s.ToString(); },
          [](const CumulativeQuery& c) { return absl::StrCat("cum:", c.b); },
          [](const LinearQuery& l) {
            return "linear:" + (l.name.empty() ? std::string("unnamed") : l.name);
          },
      },
      q);
}

absl::StatusOr<std::vector<QuerySpec>> ParseQueries(const nlohmann::json& list) {
  if (!list.is_array()) {
    return absl::InvalidArgumentError("query list must be a JSON array");
  }
  std::vector<QuerySpec> out;
  for (const auto& item : list) {
    if (!item.is_object() || !item.contains("kind") ||
        !item.at("kind").is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat("query ", item.dump(), " has no string 'kind'"));
    }
    const std::string kind = item.at("kind").get<std::string>();
    auto t = IntField(item, "t");
    if (!t.ok()) return t.status();
    if (kind == "window") {
      auto s = Field(item, "s");
      if (!s.ok()) return s.status();
      if (!s->is_string()) {
        return absl::InvalidArgumentError("'s' must be a bit string");
      }
      auto key = SuffixKey::Parse(s->get<std::string>());
      if (!key.ok()) return key.status();
      if (*t < key->k()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "window query ", item.dump(), " needs t >= ", key->k()));
      }
      out.push_back(WindowQuery{*key, *t});
    } else if (kind == "cum") {
      auto b = IntField(item, "b");
      if (!b.ok()) return b.status();
      if (*b < 0 || *t < 1) {
        return absl::InvalidArgumentError(
            absl::StrCat("cumulative query ", item.dump(),
                         " needs b >= 0 and t >= 1"));
      }
      out.push_back(CumulativeQuery{*b, *t});
    } else if (kind == "linear") {
      auto weights = Field(item, "weights");
      if (!weights.ok()) return weights.status();
      if (!weights->is_object() || weights->empty()) {
        return absl::InvalidArgumentError(
            "'weights' must be a non-empty object of suffix -> weight");
      }
      LinearQuery linear;
      linear.t = *t;
      if (item.contains("name") && item.at("name").is_string()) {
        linear.name = item.at("name").get<std::string>();
      }
      for (const auto& [bits, w] : weights->items()) {
        auto key = SuffixKey::Parse(bits);
        if (!key.ok()) return key.status();
        if (linear.k == 0) {
          linear.k = key->k();
          linear.weights.assign(std::size_t{1} << linear.k, 0.0);
        } else if (key->k() != linear.k) {
          return absl::InvalidArgumentError(
              "linear query weights mix suffix lengths");
        }
        if (!w.is_number() || !std::isfinite(w.get<double>())) {
          return absl::InvalidArgumentError(
              absl::StrCat("weight for '", bits, "' is not a finite number"));
        }
        linear.weights[key->code()] = w.get<double>();
      }
      if (*t < linear.k) {
        return absl::InvalidArgumentError(absl::StrCat(
            "linear query ", item.dump(), " needs t >= ", linear.k));
      }
      out.push_back(std::move(linear));
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown query kind '", kind, "'"));
    }
  }
  return out;
}

nlohmann::json QueryToJson(const QuerySpec& q) {
  return std::visit(
      Overloaded{
          [](const WindowQuery& w) {
            return nlohmann::json{
                {"kind", "window"}, {"s", w.s.ToString()}, {"t", w.t}};
          },
          [](const CumulativeQuery& c) {
            return nlohmann::json{{"kind", "cum"}, {"b", c.b}, {"t", c.t}};
          },
          [](const LinearQuery& l) {
            nlohmann::json weights = nlohmann::json::object();
            for (uint32_t s = 0; s < l.weights.size(); ++s) {
              if (l.weights[s] != 0) {
                weights[SuffixKey(l.k, s).ToString()] = l.weights[s];
              }
            }
            nlohmann::json out{{"kind", "linear"}, {"t", l.t}, {"weights", weights}};
            if (!l.name.empty()) out["name"] = l.name;
            return out;
          },
      },
      q);
}

absl::StatusOr<double> WeightedCount(const BitPanel& data, const QuerySpec& q) {
  if (absl::Status s = CheckRound(data, q); !s.ok()) return s;
  const int t = QueryRound(q);
  if (const auto* c = std::get_if<CumulativeQuery>(&q)) {
    auto counts = TrueCumulativeCounts(data, t);
    if (!counts.ok()) return counts.status();
    return c->b <= t ? static_cast<double>((*counts)[c->b]) : 0.0;
  }
  auto hist = TrueSuffixHistogram(data, QueryWindow(q), t);
  if (!hist.ok()) return hist.status();
  if (const auto* w = std::get_if<WindowQuery>(&q)) {
    return static_cast<double>((*hist)[w->s]);
  }
  const auto& linear = std::get<LinearQuery>(q);
  double total = 0;
  for (uint32_t s = 0; s < hist->size(); ++s) {
    if (linear.weights[s] != 0) {
      total += linear.weights[s] * static_cast<double>((*hist)[s]);
    }
  }
  return total;
}

absl::StatusOr<double> EvalQuery(const BitPanel& data, const QuerySpec& q) {
  if (data.population() == 0) {
    return absl::InvalidArgumentError("empty population");
  }
  auto count = WeightedCount(data, q);
  if (!count.ok()) return count.status();
  return *count / static_cast<double>(data.population());
}

absl::StatusOr<QueryAnswer> EvalSynthetic(const SyntheticStore& synth,
                                          const QuerySpec& q,
                                          const ReleaseInfo& release,
                                          bool force) {
  if (synth.m() == 0) return absl::InvalidArgumentError("empty synthetic data");
  if (release.n <= 0) {
    return absl::InvalidArgumentError("release population n must be positive");
  }
  auto count = WeightedCount(synth, q);
  if (!count.ok()) return count.status();

  QueryAnswer answer;
  answer.raw = *count / static_cast<double>(synth.m());
  const int window = QueryWindow(q);
  const bool is_cumulative = std::holds_alternative<CumulativeQuery>(q);
  bool supported;
  if (release.kind == ReleaseInfo::Kind::kWindow) {
    supported = window <= release.k;
  } else {
    supported = is_cumulative;
  }
  if (!supported) {
    if (!force) {
      return absl::FailedPreconditionError(absl::StrCat(
          "UnsupportedWindow: ", QueryLabel(q), " at t=", QueryRound(q),
          " reads ", window, " rounds; the release only supports ",
          release.kind == ReleaseInfo::Kind::kWindow
              ? absl::StrCat("windows of length <= ", release.k)
              : std::string("cumulative queries")));
    }
    answer.unsupported = true;
    answer.value = answer.raw;
    return answer;
  }

  double padding = 0;
  if (release.kind == ReleaseInfo::Kind::kWindow && release.n_pad != 0) {
    // Every k-bit bin carries n_pad padding records, so a pattern on the
    // last `window` bits is matched by 2^(k - window) padded bins.
    double matched = 0;
    for (uint32_t u = 0; u < (1u << window); ++u) matched += PatternWeight(q, u);
    padding = static_cast<double>(release.n_pad) *
              std::ldexp(matched, release.k - window);
  }
  answer.value = (*count - padding) / static_cast<double>(release.n);
  return answer;
}

double DebiasFraction(int64_t raw_count, int64_t n_pad, int64_t n) {
  return static_cast<double>(raw_count - n_pad) / static_cast<double>(n);
}

absl::StatusOr<double> CumulativeFromWindowOracle(const BitPanel& data, int b,
                                                  int t, std::optional<int> k) {
  const int width = k.value_or(data.rounds());
  if (width < 1 || width > kMaxOracleHorizon) {
    return absl::InvalidArgumentError(
        absl::StrCat("oracle enumerates 2^k bins; k=", width,
                     " outside [1, ", kMaxOracleHorizon, "]"));
  }
  if (t < 1 || t > data.rounds()) {
    return absl::OutOfRangeError(
        absl::StrCat("round ", t, " outside [1, ", data.rounds(), "]"));
  }
  if (b < 0) return absl::InvalidArgumentError("b must be non-negative");
  if (data.population() == 0) return absl::InvalidArgumentError("empty data");

  // Full-width suffix histogram with rounds before 1 read as 0.
  std::vector<int64_t> bins(std::size_t{1} << width, 0);
  for (std::size_t i = 0; i < data.population(); ++i) {
    uint32_t code = 0;
    for (int r = t - width + 1; r <= t; ++r) {
      code = (code << 1) | (r >= 1 ? data.bit(i, r) : 0u);
    }
    ++bins[code];
  }
  int64_t total = 0;
  for (uint32_t s = 0; s < bins.size(); ++s) {
    if (std::popcount(s) >= b) total += bins[s];
  }
  return static_cast<double>(total) / static_cast<double>(data.population());
}

absl::StatusOr<ErrorReport> MaxErrorReport(const BitPanel& truth,
                                           const SyntheticStore& synth,
                                           const WindowReportConfig& cfg) {
  if (truth.population() == 0 || synth.m() == 0) {
    return absl::InvalidArgumentError("empty population");
  }
  const int last = std::min(truth.rounds(), synth.rounds());
  const auto n = static_cast<double>(truth.population());
  const auto m = static_cast<double>(synth.m());
  ErrorReport report;
  double max_true_frac = 0;
  for (int t = cfg.k; t <= last; ++t) {
    auto truth_hist = TrueSuffixHistogram(truth, cfg.k, t);
    if (!truth_hist.ok()) return truth_hist.status();
    auto synth_hist = TrueSuffixHistogram(synth, cfg.k, t);
    if (!synth_hist.ok()) return synth_hist.status();
    RoundErrors round{t, 0, 0, 0};
    for (uint32_t s = 0; s < truth_hist->size(); ++s) {
      const int64_t c = (*truth_hist)[s];
      const int64_t p = (*synth_hist)[s];
      const int64_t additive = std::llabs(p - (c + cfg.n_pad));
      round.max_additive = std::max(round.max_additive, additive);
      round.max_debiased_rel = std::max(
          round.max_debiased_rel, static_cast<double>(additive) / n);
      round.max_raw_rel = std::max(
          round.max_raw_rel,
          std::fabs(static_cast<double>(p) / m - static_cast<double>(c) / n));
      max_true_frac = std::max(max_true_frac, static_cast<double>(c) / n);
    }
    report.max_additive = std::max(report.max_additive, round.max_additive);
    report.max_debiased_rel =
        std::max(report.max_debiased_rel, round.max_debiased_rel);
    report.max_raw_rel = std::max(report.max_raw_rel, round.max_raw_rel);
    report.rounds.push_back(round);
  }
  if (cfg.rho.rho() > 0) {
    auto additive = ComputeErrorBound(cfg.horizon, cfg.k, cfg.rho, cfg.beta);
    if (!additive.ok()) return additive.status();
    report.additive_bound = *additive;
    report.debiased_rel_bound = *additive / n;
    auto relative = ComputeRelativeErrorBound(
        cfg.horizon, cfg.k, cfg.rho, cfg.beta,
        static_cast<int64_t>(truth.population()), max_true_frac);
    if (!relative.ok()) return relative.status();
    report.raw_rel_bound = *relative;
  }
  return report;
}

}  // namespace longsynth
