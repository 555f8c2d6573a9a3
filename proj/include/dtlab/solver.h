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

#ifndef DTLAB_SOLVER_H_
#define DTLAB_SOLVER_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dtlab/policy.h"
#include "dtlab/rational.h"
#include "dtlab/values.h"

namespace dtlab {

inline constexpr std::int64_t kDefaultPolicyBudget = 1000000;

// Number of total policies, |A| ^ #decision-points, as an exact integer.
BigInt CountTotalPolicies(const EnvironmentModel& env,
                          const DecisionPointSet& points);

// Number of behaviorally distinct policies: assignments over the decision
// points actually reached when following one's own choices from the root.
BigInt CountBehavioralPolicies(const EnvironmentModel& env);

// Streams every total policy in lexicographic order (action alphabet order
// at breadth-first-ordered decision points). The callback returns false to
// stop early. Throws BudgetExceeded up front when the count exceeds the
// budget.
void ForEachTotalPolicy(const EnvironmentModel& env,
                        std::shared_ptr<const DecisionPointSet> points,
                        std::int64_t budget,
                        const std::function<bool(const Policy&)>& fn);

// Every behaviorally distinct policy exactly once, in lexicographic order of
// its reached-point assignments. Off-play points are left undefined.
std::vector<Policy> EnumerateBehavioralPolicies(const EnvironmentModel& env,
                                                std::int64_t budget);

struct ConsistencyViolation {
  History at;
  int prescribed;
  std::vector<int> argmax;          // actions attaining the max, in order
  std::vector<Rational> action_values;  // by action id
};

struct ConsistencyResult {
  bool consistent = true;
  std::vector<ConsistencyViolation> violations;
};

// Checks the fixed-point condition pi(h) in argmax_a V^pi(h a) at every
// mu-positive decision history, evaluating V with the same policy for the
// continuations. Ties count as consistent. The policy must be total.
ConsistencyResult CheckTimeConsistency(Theory theory,
                                       const EnvironmentModel& env,
                                       const Policy& policy);

struct RejectedPolicy {
  Policy policy;
  Rational root_value;
  std::vector<ConsistencyViolation> violations;
};

struct SolveResult {
  Theory theory;
  // All time-consistent policies attaining the maximal root value among the
  // time-consistent set, lexicographically sorted; the first is canonical.
  std::vector<Policy> policies;
  Rational optimal_value;
  std::int64_t considered = 0;
  std::int64_t consistent_count = 0;
  // Inconsistent policies whose root value is at least the optimum, with
  // their violations; these are the "would be better but cannot keep its own
  // plan" cases worth reporting.
  std::vector<RejectedPolicy> rejected;

  const Policy& canonical() const { return policies.front(); }
};

// Enumerates total policies, filters by time consistency and keeps the
// maximal-root-value set. For the action-evidential and causal theories the
// result is cross-checked against backward induction.
SolveResult Solve(Theory theory, const EnvironmentModel& env,
                  std::int64_t budget = kDefaultPolicyBudget);

// Backward induction over decision points. Valid only for theories whose
// next-percept weight does not depend on the future policy (action-
// evidential and causal) and for environments whose information sets are all
// singletons. Returns per-point argmax sets.
struct InductionResult {
  std::vector<std::vector<int>> argmax;  // per decision point
  Rational root_value;
};
InductionResult BackwardInduction(Theory theory, const EnvironmentModel& env,
                                  const DecisionPointSet& points);

// Expands an InductionResult into the full policy set (product of the
// per-point argmax sets), capped by the budget.
std::vector<Policy> InductionPolicySet(
    std::shared_ptr<const DecisionPointSet> points,
    const InductionResult& induction, std::int64_t budget);

}  // namespace dtlab

#endif  // DTLAB_SOLVER_H_
