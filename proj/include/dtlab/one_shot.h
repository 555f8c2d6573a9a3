// Copyright 2026 The dtlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DTLAB_ONE_SHOT_H_
#define DTLAB_ONE_SHOT_H_

#include <optional>
#include <string>
#include <vector>

#include "dtlab/environment.h"
#include "dtlab/rational.h"

namespace dtlab {

// A single decision: one action, one percept, one payoff. Backed by a
// lifetime-1 environment model; SDT additionally needs an explicit percept
// distribution per action because the model alone does not determine one.
struct OneShotProblem {
  EnvironmentModel env;
  // percept_family[a][e] = P_a(e); optional, required only by SdtDecide.
  std::optional<std::vector<AlphabetDistribution>> percept_family;
};

enum class OneShotTheory { kSdt, kEdt, kCdt };

std::string OneShotTheoryName(OneShotTheory theory);  // "sdt" | "edt" | "cdt"
OneShotTheory OneShotTheoryFromName(const std::string& name);

struct DecisionReport {
  OneShotTheory theory;
  std::vector<Rational> values;  // by action id
  // Every action attaining the maximum, in alphabet order.
  std::vector<int> best_actions;
};

// Builds a OneShotProblem from a lifetime-1 environment; throws when the
// lifetime differs.
OneShotProblem MakeOneShot(EnvironmentModel env);

// Projects a longer environment to the decision at `history`: the hidden
// state prior becomes the posterior there and the step kernels become the
// one-shot kernels.
OneShotProblem ProjectToStep(const EnvironmentModel& env,
                             const History& history);

// value(a) = sum_e P_a(e) u(e). Throws MissingPerceptFamily without P_a.
DecisionReport SdtDecide(const OneShotProblem& problem);

// value(a) = sum_e P(e | a) u(e), the action taken as evidence.
DecisionReport EdtDecide(const OneShotProblem& problem);

// value(a) = sum_e P(e | do(a)) u(e), the action as intervention.
DecisionReport CdtDecide(const OneShotProblem& problem);

// The percept families that turn SDT into EDT or CDT.
std::vector<AlphabetDistribution> EvidentialFamily(const OneShotProblem&);
std::vector<AlphabetDistribution> CausalFamily(const OneShotProblem&);

}  // namespace dtlab

#endif  // DTLAB_ONE_SHOT_H_
