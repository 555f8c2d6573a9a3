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

#include "dtlab/values.h"

#include <optional>

#include "dtlab/errors.h"

namespace dtlab {

std::string TheoryName(Theory theory) {
  switch (theory) {
    case Theory::kActionEvidential: return "saedt";
    case Theory::kPolicyEvidential: return "spedt";
    case Theory::kCausal: return "scdt";
  }
  throw DtlabError("unknown theory");
}

Theory TheoryFromName(const std::string& name) {
  if (name == "saedt" || name == "aev") return Theory::kActionEvidential;
  if (name == "spedt" || name == "pev") return Theory::kPolicyEvidential;
  if (name == "scdt" || name == "cau") return Theory::kCausal;
  throw DtlabError("unknown theory '" + name + "'");
}

namespace {

// Mass of all continuations of (state, h) that follow the policy through
// step `to`: the product of action and percept factors summed over percept
// branches. This is the per-state weight of the cylinder event Pi.
Rational WindowMass(const EnvironmentModel& env, int state, const History& h,
                    const Policy& policy, int to_step) {
  if (h.length() >= to_step || h.length() >= env.lifetime) return Rational(1);
  int action = policy.ActionAt(h);
  Rational action_factor = env.ActionRow(state, h)[action];
  if (action_factor.is_zero()) return Rational(0);
  const auto& row = env.PerceptRow(state, h.WithAction(action));
  Rational mass(0);
  for (int e = 0; e < env.num_percepts(); ++e) {
    if (row[e].is_zero()) continue;
    mass += row[e] *
            WindowMass(env, state, h.WithStep(action, e), policy, to_step);
  }
  return action_factor * mass;
}

}  // namespace

AlphabetDistribution WindowedPerceptGivenAction(const EnvironmentModel& env,
                                                const History& h_with_action,
                                                const Policy& policy,
                                                int to_step) {
  if (!h_with_action.has_pending_action()) {
    throw DtlabError("windowed next-percept query requires a pending action");
  }
  const History base = h_with_action.WithoutPendingAction();
  const int action = h_with_action.pending_action();
  std::vector<Rational> weights = StateWeights(env, base);
  Rational base_mass(0);
  for (const Rational& w : weights) base_mass += w;
  if (base_mass.is_zero()) {
    throw UnreachableHistory("history '" + env.HistoryToString(base) +
                             "' has probability zero");
  }

  AlphabetDistribution dist(env.num_percepts(), Rational(0));
  Rational total(0);
  for (int s = 0; s < env.num_states(); ++s) {
    if (weights[s].is_zero()) continue;
    Rational action_factor = env.ActionRow(s, base)[action];
    if (action_factor.is_zero()) continue;
    const auto& row = env.PerceptRow(s, h_with_action);
    for (int e = 0; e < env.num_percepts(); ++e) {
      if (row[e].is_zero()) continue;
      Rational mass = weights[s] * action_factor * row[e] *
                      WindowMass(env, s, base.WithStep(action, e), policy,
                                 to_step);
      dist[e] += mass;
      total += mass;
    }
  }
  if (total.is_zero()) {
    throw ZeroProbabilityEvent(
        "policy window has probability zero at history '" +
        env.HistoryToString(h_with_action) + "'");
  }
  for (Rational& p : dist) p /= total;
  return dist;
}

AlphabetDistribution PolicyConditional(const EnvironmentModel& env,
                                       const History& h,
                                       const PolicyWindow& window) {
  if (window.from != h.length() + 1) {
    throw DtlabError("policy window must start at the next step");
  }
  int action = window.policy->ActionAt(h);
  return WindowedPerceptGivenAction(env, h.WithAction(action), *window.policy,
                                    window.to);
}

std::vector<Rational> ActionPosterior(const EnvironmentModel& env,
                                      const History& h_with_action) {
  if (!h_with_action.has_pending_action()) {
    throw DtlabError("action posterior requires a pending action");
  }
  return StatePosterior(env, h_with_action);
}

std::vector<Rational> WindowPosterior(const EnvironmentModel& env,
                                      const History& h,
                                      const PolicyWindow& window) {
  std::vector<Rational> weights = StateWeights(env, h);
  Rational base_mass(0);
  for (const Rational& w : weights) base_mass += w;
  if (base_mass.is_zero()) {
    throw UnreachableHistory("history '" + env.HistoryToString(h) +
                             "' has probability zero");
  }
  Rational total(0);
  for (int s = 0; s < env.num_states(); ++s) {
    if (weights[s].is_zero()) continue;
    weights[s] *= WindowMass(env, s, h, *window.policy, window.to);
    total += weights[s];
  }
  if (total.is_zero()) {
    throw ZeroProbabilityEvent(
        "policy window has probability zero at history '" +
        env.HistoryToString(h) + "'");
  }
  for (Rational& w : weights) w /= total;
  return weights;
}

std::vector<Rational> BeliefExpansion(Theory theory,
                                      const EnvironmentModel& env,
                                      const History& h, const Policy* policy) {
  switch (theory) {
    case Theory::kActionEvidential:
      return ActionPosterior(env, h);
    case Theory::kPolicyEvidential: {
      if (policy == nullptr) {
        throw DtlabError("policy-evidential posterior requires a policy");
      }
      PolicyWindow window{policy, h.length() + 1, env.lifetime};
      return WindowPosterior(env, h.WithoutPendingAction(), window);
    }
    case Theory::kCausal:
      return StatePosterior(env, h.WithoutPendingAction());
  }
  throw DtlabError("unknown theory");
}

AlphabetDistribution PerStatePerceptGivenWindow(const EnvironmentModel& env,
                                                int state, const History& h,
                                                const PolicyWindow& window) {
  if (window.from != h.length() + 1) {
    throw DtlabError("policy window must start at the next step");
  }
  int action = window.policy->ActionAt(h);
  Rational action_factor = env.ActionRow(state, h)[action];
  const auto& row = env.PerceptRow(state, h.WithAction(action));
  AlphabetDistribution dist(env.num_percepts(), Rational(0));
  Rational total(0);
  if (!action_factor.is_zero()) {
    for (int e = 0; e < env.num_percepts(); ++e) {
      if (row[e].is_zero()) continue;
      Rational mass = row[e] * WindowMass(env, state, h.WithStep(action, e),
                                          *window.policy, window.to);
      dist[e] = mass;
      total += mass;
    }
  }
  if (total.is_zero()) {
    throw ZeroProbabilityEvent(
        "policy window has probability zero for state " + env.states[state]);
  }
  for (Rational& p : dist) p /= total;
  return dist;
}

namespace {

enum class EntryForm { kBareHistory, kWithAction };

Rational RecursiveValue(Theory theory, const EnvironmentModel& env,
                        const Policy& policy, const History& h) {
  if (!h.has_pending_action()) {
    const int step = h.length() + 1;
    if (step > env.lifetime) return Rational(0);
    if (theory == Theory::kPolicyEvidential) {
      // Bare-history entry point: condition on the window from this step on,
      // which already pins the next action to the policy's.
      PolicyWindow window{&policy, step, env.lifetime};
      AlphabetDistribution dist = PolicyConditional(env, h, window);
      int action = policy.ActionAt(h);
      Rational value(0);
      for (int e = 0; e < env.num_percepts(); ++e) {
        if (dist[e].is_zero()) continue;
        value += dist[e] * (env.utility[e] +
                            RecursiveValue(theory, env, policy,
                                           h.WithStep(action, e)));
      }
      return value;
    }
    return RecursiveValue(theory, env, policy,
                          h.WithAction(policy.ActionAt(h)));
  }

  const History base = h.WithoutPendingAction();
  const int step = base.length() + 1;
  if (step > env.lifetime) return Rational(0);
  const int action = h.pending_action();

  AlphabetDistribution dist;
  switch (theory) {
    case Theory::kActionEvidential:
      dist = NextPerceptGivenAction(env, h);
      break;
    case Theory::kPolicyEvidential:
      dist = WindowedPerceptGivenAction(env, h, policy, env.lifetime);
      break;
    case Theory::kCausal:
      dist = NextPerceptDoAction(env, base, action);
      break;
  }
  Rational value(0);
  for (int e = 0; e < env.num_percepts(); ++e) {
    if (dist[e].is_zero()) continue;
    value += dist[e] * (env.utility[e] +
                        RecursiveValue(theory, env, policy,
                                       base.WithStep(action, e)));
  }
  return value;
}

}  // namespace

Rational Value(Theory theory, const EnvironmentModel& env,
               const Policy& policy, const History& h) {
  if (HistoryProbability(env, h.WithoutPendingAction()).is_zero()) {
    throw UnreachableHistory("history '" +
                             env.HistoryToString(h.WithoutPendingAction()) +
                             "' has probability zero");
  }
  return RecursiveValue(theory, env, policy, h);
}

Rational ActionEvidentialValue(const EnvironmentModel& env,
                               const Policy& policy, const History& h) {
  return Value(Theory::kActionEvidential, env, policy, h);
}

Rational PolicyEvidentialValue(const EnvironmentModel& env,
                               const Policy& policy, const History& h) {
  return Value(Theory::kPolicyEvidential, env, policy, h);
}

Rational CausalValue(const EnvironmentModel& env, const Policy& policy,
                     const History& h) {
  return Value(Theory::kCausal, env, policy, h);
}

namespace {

// One step weight of the flattened sum, in the requested form.
AlphabetDistribution IterativeStepWeight(Theory theory,
                                         const EnvironmentModel& env,
                                         const Policy& policy,
                                         const History& h, int action,
                                         IterativeForm form) {
  const History with_action = h.WithAction(action);
  if (form == IterativeForm::kDirect) {
    switch (theory) {
      case Theory::kActionEvidential:
        return NextPerceptGivenAction(env, with_action);
      case Theory::kPolicyEvidential:
        return WindowedPerceptGivenAction(env, with_action, policy,
                                          env.lifetime);
      case Theory::kCausal:
        return NextPerceptDoAction(env, h, action);
    }
    throw DtlabError("unknown theory");
  }

  // State-expanded form: weight = sum over s of posterior(s) * per-state
  // next-percept conditional.
  std::vector<Rational> posterior;
  AlphabetDistribution dist(env.num_percepts(), Rational(0));
  switch (theory) {
    case Theory::kActionEvidential: {
      posterior = ActionPosterior(env, with_action);
      for (int s = 0; s < env.num_states(); ++s) {
        if (posterior[s].is_zero()) continue;
        const auto& row = env.PerceptRow(s, with_action);
        for (int e = 0; e < env.num_percepts(); ++e) {
          dist[e] += posterior[s] * row[e];
        }
      }
      return dist;
    }
    case Theory::kPolicyEvidential: {
      PolicyWindow window{&policy, h.length() + 1, env.lifetime};
      posterior = WindowPosterior(env, h, window);
      for (int s = 0; s < env.num_states(); ++s) {
        if (posterior[s].is_zero()) continue;
        AlphabetDistribution per_state =
            PerStatePerceptGivenWindow(env, s, h, window);
        for (int e = 0; e < env.num_percepts(); ++e) {
          dist[e] += posterior[s] * per_state[e];
        }
      }
      return dist;
    }
    case Theory::kCausal: {
      posterior = StatePosterior(env, h);
      for (int s = 0; s < env.num_states(); ++s) {
        if (posterior[s].is_zero()) continue;
        const auto& row = env.PerceptRow(s, with_action);
        for (int e = 0; e < env.num_percepts(); ++e) {
          dist[e] += posterior[s] * row[e];
        }
      }
      return dist;
    }
  }
  throw DtlabError("unknown theory");
}

void IterativeWalk(Theory theory, const EnvironmentModel& env,
                   const Policy& policy, const History& h,
                   std::optional<int> forced_action, const Rational& prefix,
                   IterativeForm form, Rational* total) {
  if (h.length() + 1 > env.lifetime) return;
  int action = forced_action.has_value() ? *forced_action : policy.ActionAt(h);
  AlphabetDistribution weight =
      IterativeStepWeight(theory, env, policy, h, action, form);
  for (int e = 0; e < env.num_percepts(); ++e) {
    if (weight[e].is_zero()) continue;
    Rational path = prefix * weight[e];
    *total += path * env.utility[e];
    IterativeWalk(theory, env, policy, h.WithStep(action, e), std::nullopt,
                  path, form, total);
  }
}

}  // namespace

Rational IterativeValue(Theory theory, const EnvironmentModel& env,
                        const Policy& policy, const History& h,
                        IterativeForm form) {
  Rational total(0);
  std::optional<int> forced;
  History base = h;
  if (h.has_pending_action()) {
    forced = h.pending_action();
    base = h.WithoutPendingAction();
  }
  if (HistoryProbability(env, base).is_zero()) {
    throw UnreachableHistory("history '" + env.HistoryToString(base) +
                             "' has probability zero");
  }
  IterativeWalk(theory, env, policy, base, forced, Rational(1), form, &total);
  return total;
}

}  // namespace dtlab
