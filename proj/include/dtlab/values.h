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

#ifndef DTLAB_VALUES_H_
#define DTLAB_VALUES_H_

#include <string>
#include <vector>

#include "dtlab/environment.h"
#include "dtlab/policy.h"
#include "dtlab/rational.h"

namespace dtlab {

// The three sequential theories. Action-evidential conditions the next
// percept on the next action, policy-evidential on the whole remaining
// policy, causal on the intervention fixing the next action.
enum class Theory { kActionEvidential, kPolicyEvidential, kCausal };

std::string TheoryName(Theory theory);          // "saedt" | "spedt" | "scdt"
Theory TheoryFromName(const std::string& name);

// A policy restricted to steps [from, to], both 1-based and inclusive.
struct PolicyWindow {
  const Policy* policy;
  int from;
  int to;
};

// mu(e_t | h ∩ Pi_{from:to}): the next percept conditional on the cylinder
// event that the policy is followed over the window. Only the actions inside
// the window constrain the event. `from` must be h.length()+1.
AlphabetDistribution PolicyConditional(const EnvironmentModel& env,
                                       const History& h,
                                       const PolicyWindow& window);

// mu(e_t | h a, Pi_{t+1:to}): next percept given the taken action as
// evidence plus the future policy window.
AlphabetDistribution WindowedPerceptGivenAction(const EnvironmentModel& env,
                                                const History& h_with_action,
                                                const Policy& policy,
                                                int to_step);

// Recursive value functions. The history may carry a pending action (the
// "history then action" query form); without one the policy's own action is
// substituted. Histories past the lifetime evaluate to zero.
Rational ActionEvidentialValue(const EnvironmentModel& env,
                               const Policy& policy, const History& h);
Rational PolicyEvidentialValue(const EnvironmentModel& env,
                               const Policy& policy, const History& h);
Rational CausalValue(const EnvironmentModel& env, const Policy& policy,
                     const History& h);
Rational Value(Theory theory, const EnvironmentModel& env,
               const Policy& policy, const History& h);

// The flattened single-sum forms of the value functions. kDirect uses the
// engine's next-percept conditionals as step weights; kStateExpanded expands
// every weight over the hidden-state posterior and recombines. Both agree
// exactly with the recursive form.
enum class IterativeForm { kDirect, kStateExpanded };
Rational IterativeValue(Theory theory, const EnvironmentModel& env,
                        const Policy& policy, const History& h,
                        IterativeForm form);

// Hidden-state posteriors used by the state-expanded forms:
//   action-evidential: mu(s | h a)         (pending action required)
//   policy-evidential: mu(s | h ∩ Pi_{t:m})
//   causal:            mu(s | h)
std::vector<Rational> ActionPosterior(const EnvironmentModel& env,
                                      const History& h_with_action);
std::vector<Rational> WindowPosterior(const EnvironmentModel& env,
                                      const History& h,
                                      const PolicyWindow& window);
std::vector<Rational> BeliefExpansion(Theory theory,
                                      const EnvironmentModel& env,
                                      const History& h, const Policy* policy);

// mu(e_t | s, h, Pi_{t:to}): the per-state next-percept conditional under a
// policy window; recombining it with WindowPosterior reproduces
// PolicyConditional exactly.
AlphabetDistribution PerStatePerceptGivenWindow(const EnvironmentModel& env,
                                                int state, const History& h,
                                                const PolicyWindow& window);

}  // namespace dtlab

#endif  // DTLAB_VALUES_H_
