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

#ifndef LONGSYNTH_HARNESS_SIMULATE_H_
#define LONGSYNTH_HARNESS_SIMULATE_H_

#include <cstdint>
#include <string>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "longsynth/core_model.h"
#include "longsynth/rng.h"

namespace longsynth {

struct SimulationSpec {
  enum class Kind {
    kAllOnes,    // every report is 1
    kBernoulli,  // iid Bernoulli(p)
    kFromSeed,   // iid fair bits
    kSippLike,   // two-state Markov chain shaped like monthly poverty spells
  };
  Kind kind = Kind::kAllOnes;
  double p = 0.5;

  // kSippLike: Pr[x^1 = 1], Pr[x^t = 1 | x^{t-1} = 1], Pr[x^t = 1 | x^{t-1} = 0].
  // Stationary rate 0.02 / (0.02 + 0.15) ~ 11.8%.
  double initial = 0.11;
  double stay = 0.85;
  double enter = 0.02;
};

absl::StatusOr<SimulationSpec::Kind> ParseSimulationKind(const std::string& name);
std::string SimulationKindName(SimulationSpec::Kind kind);
nlohmann::json SimulationToJson(const SimulationSpec& spec);

// Deterministic for a fixed generator state.
absl::StatusOr<LongitudinalDataset> SimulateDataset(const SimulationSpec& spec,
                                                    int64_t n, int horizon,
                                                    Rng& rng);

}  // namespace longsynth

#endif  // LONGSYNTH_HARNESS_SIMULATE_H_
