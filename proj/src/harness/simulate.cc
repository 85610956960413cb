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

#include "longsynth/harness/simulate.h"

#include <vector>

#include "absl/strings/str_cat.h"

namespace longsynth {
namespace {

absl::Status CheckProbability(double p, const char* name) {
  if (!(p >= 0 && p <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " must lie in [0, 1], got ", p));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<SimulationSpec::Kind> ParseSimulationKind(const std::string& name) {
  if (name == "all_ones") return SimulationSpec::Kind::kAllOnes;
  if (name == "bernoulli") return SimulationSpec::Kind::kBernoulli;
  if (name == "from_seed") return SimulationSpec::Kind::kFromSeed;
  if (name == "sipp_like") return SimulationSpec::Kind::kSippLike;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown simulation kind '", name,
                   "' (all_ones, bernoulli, from_seed, sipp_like)"));
}

std::string SimulationKindName(SimulationSpec::Kind kind) {
  switch (kind) {
    case SimulationSpec::Kind::kAllOnes:
      return "all_ones";
    case SimulationSpec::Kind::kBernoulli:
      return "bernoulli";
    case SimulationSpec::Kind::kFromSeed:
      return "from_seed";
    case SimulationSpec::Kind::kSippLike:
      return "sipp_like";
  }
  return "unknown";
}

nlohmann::json SimulationToJson(const SimulationSpec& spec) {
  nlohmann::json out{{"kind", SimulationKindName(spec.kind)}};
  if (spec.kind == SimulationSpec::Kind::kBernoulli) out["p"] = spec.p;
  if (spec.kind == SimulationSpec::Kind::kSippLike) {
    out["initial"] = spec.initial;
    out["stay"] = spec.stay;
    out["enter"] = spec.enter;
  }
  return out;
}

absl::StatusOr<LongitudinalDataset> SimulateDataset(const SimulationSpec& spec,
                                                    int64_t n, int horizon,
                                                    Rng& rng) {
  if (n < 1 || horizon < 1) {
    return absl::InvalidArgumentError("n and T must be at least 1");
  }
  for (auto [p, name] : {std::pair{spec.p, "p"}, {spec.initial, "initial"},
                         {spec.stay, "stay"}, {spec.enter, "enter"}}) {
    if (absl::Status s = CheckProbability(p, name); !s.ok()) return s;
  }
  const auto size = static_cast<std::size_t>(n);
  LongitudinalDataset data(size);
  std::vector<uint8_t> previous(size, 0);
  for (int t = 1; t <= horizon; ++t) {
    RoundUpdate update{t, std::vector<uint8_t>(size, 0)};
    for (std::size_t i = 0; i < size; ++i) {
      double p = 0;
      switch (spec.kind) {
        case SimulationSpec::Kind::kAllOnes:
          p = 1;
          break;
        case SimulationSpec::Kind::kBernoulli:
          p = spec.p;
          break;
        case SimulationSpec::Kind::kFromSeed:
          p = 0.5;
          break;
        case SimulationSpec::Kind::kSippLike:
          p = t == 1 ? spec.initial : (previous[i] ? spec.stay : spec.enter);
          break;
      }
      if (p >= 1) {
        update.bits[i] = 1;
      } else if (p > 0) {
        update.bits[i] = rng.UnitDouble() < p ? 1 : 0;
      }
    }
    previous = update.bits;
    if (absl::Status s = data.IngestRound(update); !s.ok()) return s;
  }
  return data;
}

}  // namespace longsynth
