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

#include "dtlab/solver.h"

#include <algorithm>
#include <limits>
#include <map>

#include "dtlab/errors.h"

namespace dtlab {

BigInt CountTotalPolicies(const EnvironmentModel& env,
                          const DecisionPointSet& points) {
  BigInt count = 1;
  for (int i = 0; i < points.size(); ++i) count *= env.num_actions();
  return count;
}

namespace {

// Counts behavioral policies by tree recursion, short-circuiting at `cap`.
// Without declared information sets the per-branch counts multiply; with
// them we fall back to explicit assignment recursion over the frontier.
BigInt CountBehavioralFromHistory(const EnvironmentModel& env,
                                  const History& h, const BigInt& cap,
                                  std::map<std::vector<int>, BigInt>* memo) {
  if (h.length() >= env.lifetime) return 1;
  auto it = memo->find(h.Key());
  if (it != memo->end()) return it->second;
  BigInt total = 0;
  for (int a = 0; a < env.num_actions(); ++a) {
    BigInt branch = 1;
    AlphabetDistribution dist = NextPerceptGivenAction(env, h.WithAction(a));
    for (int e = 0; e < env.num_percepts(); ++e) {
      if (dist[e].is_zero()) continue;
      branch *= CountBehavioralFromHistory(env, h.WithStep(a, e), cap, memo);
      if (branch > cap) break;
    }
    total += branch;
    if (total > cap) break;
  }
  (*memo)[h.Key()] = total;
  return total;
}

struct FrontierEnumerator {
  const EnvironmentModel& env;
  std::shared_ptr<const DecisionPointSet> points;
  std::int64_t budget;
  std::vector<Policy>* out;

  void Recurse(const std::vector<History>& frontier, Policy current) {
    if (frontier.empty()) {
      if (out->size() >= static_cast<size_t>(budget)) {
        throw BudgetExceeded("behavioral policy enumeration exceeds budget",
                             std::to_string(out->size() + 1) + "+");
      }
      out->push_back(std::move(current));
      return;
    }
    // Distinct decision points of this frontier, in breadth-first order.
    std::vector<int> frontier_points;
    for (const History& h : frontier) {
      int p = points->PointOf(h);
      if (std::find(frontier_points.begin(), frontier_points.end(), p) ==
          frontier_points.end()) {
        frontier_points.push_back(p);
      }
    }
    std::sort(frontier_points.begin(), frontier_points.end());

    std::vector<int> assignment(frontier_points.size(), 0);
    while (true) {
      Policy next = current;
      for (size_t i = 0; i < frontier_points.size(); ++i) {
        next.SetPoint(frontier_points[i], assignment[i]);
      }
      std::vector<History> next_frontier;
      for (const History& h : frontier) {
        int action = next.ActionAt(h);
        AlphabetDistribution dist =
            NextPerceptGivenAction(env, h.WithAction(action));
        for (int e = 0; e < env.num_percepts(); ++e) {
          if (dist[e].is_zero()) continue;
          History extended = h.WithStep(action, e);
          if (extended.length() < env.lifetime) {
            next_frontier.push_back(extended);
          }
        }
      }
      Recurse(next_frontier, std::move(next));

      // Advance the odometer, last point fastest.
      int i = static_cast<int>(assignment.size()) - 1;
      while (i >= 0 && assignment[i] == env.num_actions() - 1) {
        assignment[i] = 0;
        --i;
      }
      if (i < 0) break;
      ++assignment[i];
    }
  }
};

}  // namespace

BigInt CountBehavioralPolicies(const EnvironmentModel& env,
                               const DecisionPointSet& points) {
  const BigInt cap = BigInt(1) << 128;
  if (env.infosets.empty()) {
    std::map<std::vector<int>, BigInt> memo;
    return CountBehavioralFromHistory(env, History(), cap, &memo);
  }
  std::vector<Policy> all;
  auto shared = DecisionPointSet::Compute(env);
  FrontierEnumerator enumerator{env, shared,
                                std::numeric_limits<std::int64_t>::max(),
                                &all};
  enumerator.Recurse({History()}, Policy(shared));
  return BigInt(all.size());
}

void ForEachTotalPolicy(const EnvironmentModel& env,
                        std::shared_ptr<const DecisionPointSet> points,
                        std::int64_t budget,
                        const std::function<bool(const Policy&)>& fn) {
  BigInt count = CountTotalPolicies(env, *points);
  if (count > BigInt(budget)) {
    throw BudgetExceeded("policy enumeration exceeds the budget of " +
                             std::to_string(budget) + " policies",
                         count.str());
  }
  std::vector<int> choice(points->size(), 0);
  while (true) {
    if (!fn(Policy(points, choice))) return;
    int i = points->size() - 1;
    while (i >= 0 && choice[i] == env.num_actions() - 1) {
      choice[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++choice[i];
  }
}

std::vector<Policy> EnumerateBehavioralPolicies(const EnvironmentModel& env,
                                                std::int64_t budget) {
  auto points = DecisionPointSet::Compute(env);
  BigInt count = CountBehavioralPolicies(env, *points);
  if (count > BigInt(budget)) {
    throw BudgetExceeded("behavioral policy enumeration exceeds the budget of " +
                             std::to_string(budget) + " policies",
                         count.str());
  }
  std::vector<Policy> out;
  FrontierEnumerator enumerator{env, points, budget, &out};
  enumerator.Recurse({History()}, Policy(points));
  return out;
}

ConsistencyResult CheckTimeConsistency(Theory theory,
                                       const EnvironmentModel& env,
                                       const Policy& policy) {
  if (!policy.total()) {
    throw DtlabError("time-consistency check requires a total policy");
  }
  ConsistencyResult result;
  const DecisionPointSet& points = policy.points();
  for (int p = 0; p < points.size(); ++p) {
    int prescribed = policy.ActionAtPoint(p);
    for (const History& h : points.histories(p)) {
      std::vector<Rational> values;
      values.reserve(env.num_actions());
      for (int a = 0; a < env.num_actions(); ++a) {
        values.push_back(Value(theory, env, policy, h.WithAction(a)));
      }
      Rational best = values[0];
      for (const Rational& v : values) {
        if (v > best) best = v;
      }
      std::vector<int> argmax;
      for (int a = 0; a < env.num_actions(); ++a) {
        if (values[a] == best) argmax.push_back(a);
      }
      if (std::find(argmax.begin(), argmax.end(), prescribed) ==
          argmax.end()) {
        result.consistent = false;
        result.violations.push_back(
            {h, prescribed, std::move(argmax), std::move(values)});
      }
    }
  }
  return result;
}

InductionResult BackwardInduction(Theory theory, const EnvironmentModel& env,
                                  const DecisionPointSet& points) {
  if (theory == Theory::kPolicyEvidential) {
    throw DtlabError(
        "backward induction is not valid for the policy-evidential theory");
  }
  for (int p = 0; p < points.size(); ++p) {
    if (points.histories(p).size() != 1) {
      throw DtlabError(
          "backward induction requires singleton information sets");
    }
  }

  InductionResult result;
  result.argmax.resize(points.size());
  std::map<std::vector<int>, Rational> value;  // history key -> V(h)

  for (int p = points.size() - 1; p >= 0; --p) {
    const History& h = points.representative(p);
    std::vector<Rational> q(env.num_actions(), Rational(0));
    for (int a = 0; a < env.num_actions(); ++a) {
      AlphabetDistribution weight =
          theory == Theory::kActionEvidential
              ? NextPerceptGivenAction(env, h.WithAction(a))
              : NextPerceptDoAction(env, h, a);
      for (int e = 0; e < env.num_percepts(); ++e) {
        if (weight[e].is_zero()) continue;
        History extended = h.WithStep(a, e);
        Rational continuation(0);
        if (extended.length() < env.lifetime) {
          continuation = value.at(extended.Key());
        }
        q[a] += weight[e] * (env.utility[e] + continuation);
      }
    }
    Rational best = q[0];
    for (const Rational& v : q) {
      if (v > best) best = v;
    }
    for (int a = 0; a < env.num_actions(); ++a) {
      if (q[a] == best) result.argmax[p].push_back(a);
    }
    value[h.Key()] = best;
  }
  result.root_value = value.at(History().Key());
  return result;
}

std::vector<Policy> InductionPolicySet(
    const EnvironmentModel& env,
    std::shared_ptr<const DecisionPointSet> points,
    const InductionResult& induction, std::int64_t budget) {
  BigInt count = 1;
  for (const auto& set : induction.argmax) count *= set.size();
  if (count > BigInt(budget)) {
    throw BudgetExceeded("induction policy set exceeds the budget",
                         count.str());
  }
  std::vector<Policy> out;
  std::vector<size_t> pick(induction.argmax.size(), 0);
  while (true) {
    std::vector<int> choice(points->size());
    for (int p = 0; p < points->size(); ++p) {
      choice[p] = induction.argmax[p][pick[p]];
    }
    out.emplace_back(points, std::move(choice));
    int i = static_cast<int>(pick.size()) - 1;
    while (i >= 0 && pick[i] + 1 == induction.argmax[i].size()) {
      pick[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++pick[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

SolveResult Solve(Theory theory, const EnvironmentModel& env,
                  std::int64_t budget) {
  auto points = DecisionPointSet::Compute(env);
  SolveResult result;
  result.theory = theory;

  bool have_best = false;
  Rational best_value(0);
  std::vector<RejectedPolicy> rejected;
  Rational best_rejected(0);
  bool have_rejected = false;

  ForEachTotalPolicy(env, points, budget, [&](const Policy& policy) {
    ++result.considered;
    Rational root = Value(theory, env, policy, History());
    ConsistencyResult tc = CheckTimeConsistency(theory, env, policy);
    if (tc.consistent) {
      ++result.consistent_count;
      if (!have_best || root > best_value) {
        have_best = true;
        best_value = root;
        result.policies.clear();
        result.policies.push_back(policy);
        // Inconsistent candidates strictly below the optimum are no longer
        // interesting.
        std::erase_if(rejected, [&](const RejectedPolicy& r) {
          return r.root_value < best_value;
        });
      } else if (root == best_value) {
        result.policies.push_back(policy);
      }
    } else if (!have_best || root >= best_value) {
      rejected.push_back({policy, root, std::move(tc.violations)});
      if (!have_rejected || root > best_rejected) {
        have_rejected = true;
        best_rejected = root;
      }
    }
    return true;
  });

  if (have_best) {
    result.optimal_value = best_value;
    std::erase_if(rejected, [&](const RejectedPolicy& r) {
      return r.root_value < best_value;
    });
  } else if (have_rejected) {
    // No time-consistent policy exists; surface the top inconsistent
    // candidates and their violations for inspection.
    std::erase_if(rejected, [&](const RejectedPolicy& r) {
      return r.root_value < best_rejected;
    });
  }
  result.rejected = std::move(rejected);
  std::sort(result.policies.begin(), result.policies.end());

  // Backward induction must agree whenever it applies.
  bool singleton_infosets = true;
  for (int p = 0; p < points->size(); ++p) {
    if (points->histories(p).size() != 1) singleton_infosets = false;
  }
  if (theory != Theory::kPolicyEvidential && singleton_infosets && have_best) {
    InductionResult induction = BackwardInduction(theory, env, *points);
    std::vector<Policy> induced =
        InductionPolicySet(env, points, induction, budget);
    if (induced != result.policies ||
        induction.root_value != result.optimal_value) {
      throw DtlabError(
          "internal inconsistency: backward induction and enumeration "
          "disagree");
    }
  }
  return result;
}

}  // namespace dtlab
