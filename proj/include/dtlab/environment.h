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

#ifndef DTLAB_ENVIRONMENT_H_
#define DTLAB_ENVIRONMENT_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dtlab/distribution.h"
#include "dtlab/rational.h"

namespace dtlab {

// An alternating action/percept sequence, optionally with a trailing action
// (the "history then action" form used when querying the next percept).
// Lengths are measured in completed steps; the first decision happens at the
// empty history.
class History {
 public:
  struct Step {
    int action;
    int percept;
    friend auto operator<=>(const Step&, const Step&) = default;
  };

  History() = default;

  int length() const { return static_cast<int>(steps_.size()); }
  const std::vector<Step>& steps() const { return steps_; }

  bool has_pending_action() const { return pending_action_.has_value(); }
  int pending_action() const { return *pending_action_; }

  History WithAction(int action) const;
  History WithPercept(int percept) const;  // completes the pending action
  History WithStep(int action, int percept) const;

  // First `count` completed steps, no pending action.
  History Prefix(int count) const;
  // Drops the pending action if present.
  History WithoutPendingAction() const;

  // Flattened ids, [a1, e1, a2, e2, ...]; excludes any pending action. Usable
  // as an ordered map key.
  std::vector<int> Key() const;

  friend auto operator<=>(const History&, const History&) = default;

 private:
  std::vector<Step> steps_;
  std::optional<int> pending_action_;
};

// The factored environment model: a hidden-state prior plus action and
// percept kernels keyed by the full observable history, truncated at a
// finite lifetime. Kernel rows exist exactly for the state-reachable
// histories; see Validate for the invariants.
struct EnvironmentModel {
  std::vector<std::string> states;
  std::vector<std::string> actions;
  std::vector<std::string> percepts;
  int lifetime = 1;
  std::vector<Rational> prior;               // by state index
  std::vector<Rational> utility;             // by percept index
  // (state, history key) -> distribution over actions.
  std::map<std::vector<int>, std::vector<Rational>> action_kernel;
  // (state, history key incl. trailing action) -> distribution over percepts.
  std::map<std::vector<int>, std::vector<Rational>> percept_kernel;
  // Declared information sets: groups of observable histories that must
  // receive the same policy action. Histories not mentioned form singleton
  // decision points.
  std::vector<std::vector<History>> infosets;

  int num_states() const { return static_cast<int>(states.size()); }
  int num_actions() const { return static_cast<int>(actions.size()); }
  int num_percepts() const { return static_cast<int>(percepts.size()); }

  int StateIndex(const std::string& name) const;
  int ActionIndex(const std::string& name) const;
  int PerceptIndex(const std::string& name) const;

  // Kernel row lookups; throw DtlabError when the row is missing.
  const std::vector<Rational>& ActionRow(int state, const History& h) const;
  const std::vector<Rational>& PerceptRow(int state,
                                          const History& h_with_action) const;
  bool HasActionRow(int state, const History& h) const;
  bool HasPerceptRow(int state, const History& h_with_action) const;

  std::string HistoryToString(const History& h) const;
  // Parses "a1 e1 a2 e2 [a3]" using alphabet names; empty string is the
  // empty history.
  History HistoryFromString(const std::string& text) const;
};

// A distribution over one alphabet (percepts or actions), indexed by id.
using AlphabetDistribution = std::vector<Rational>;

struct ValidationIssue {
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool clean() const { return issues.empty(); }
};

// Reports every violated model invariant: non-normalized prior or kernel
// rows, missing rows on reachable histories, zero-probability actions on
// reachable (state, history) pairs, malformed sizes.
ValidationReport Validate(const EnvironmentModel& env);

// Unnormalized state weights mu(s, h); includes the pending action factor
// when the history carries one. A weight of zero marks states that cannot
// produce the history.
std::vector<Rational> StateWeights(const EnvironmentModel& env,
                                   const History& h);

// mu(h): total probability of the observable history.
Rational HistoryProbability(const EnvironmentModel& env, const History& h);

// mu(s | h); throws UnreachableHistory when mu(h) = 0.
std::vector<Rational> StatePosterior(const EnvironmentModel& env,
                                     const History& h);

// mu(e_t | h a_t): next-percept conditional given the pending action, taken
// as evidence. Throws UnreachableHistory.
AlphabetDistribution NextPerceptGivenAction(const EnvironmentModel& env,
                                            const History& h_with_action);

// mu(e_t | h, do(a_t)): the causal intervention. Computed by deleting the
// action factor, never by conditioning on the action.
AlphabetDistribution NextPerceptDoAction(const EnvironmentModel& env,
                                         const History& h, int action);

class Policy;  // defined in policy.h

// mu(e_t | h, do(pi_{t:m})): intervene on every remaining action and
// marginalize the later percepts. Summed out in full rather than reduced
// algebraically, so its agreement with NextPerceptDoAction is a meaningful
// check.
AlphabetDistribution NextPerceptDoPolicy(const EnvironmentModel& env,
                                         const History& h,
                                         const Policy& policy);

// The full joint over (s, trajectory); its marginals reproduce the prior and
// every kernel row exactly.
FiniteDistribution Joint(const EnvironmentModel& env);

// The single-hidden-state model with identical observable action and percept
// probabilities on every reachable history.
EnvironmentModel CollapseHiddenState(const EnvironmentModel& env);

// All mu-positive observable histories of exactly `length` completed steps.
std::vector<History> ReachableHistories(const EnvironmentModel& env,
                                        int length);
// All mu-positive histories of length 0 .. lifetime-1, breadth-first.
std::vector<History> AllDecisionHistories(const EnvironmentModel& env);

}  // namespace dtlab

#endif  // DTLAB_ENVIRONMENT_H_
