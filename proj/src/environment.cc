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

#include "dtlab/environment.h"

#include <algorithm>
#include <sstream>

#include "dtlab/errors.h"
#include "dtlab/policy.h"

namespace dtlab {

History History::WithAction(int action) const {
  if (pending_action_.has_value()) {
    throw DtlabError("history already carries a pending action");
  }
  History h = *this;
  h.pending_action_ = action;
  return h;
}

History History::WithPercept(int percept) const {
  if (!pending_action_.has_value()) {
    throw DtlabError("history has no pending action to complete");
  }
  History h;
  h.steps_ = steps_;
  h.steps_.push_back({*pending_action_, percept});
  return h;
}

History History::WithStep(int action, int percept) const {
  if (pending_action_.has_value()) {
    throw DtlabError("history already carries a pending action");
  }
  History h = *this;
  h.steps_.push_back({action, percept});
  return h;
}

History History::Prefix(int count) const {
  History h;
  h.steps_.assign(steps_.begin(), steps_.begin() + count);
  return h;
}

History History::WithoutPendingAction() const {
  History h;
  h.steps_ = steps_;
  return h;
}

std::vector<int> History::Key() const {
  std::vector<int> key;
  key.reserve(steps_.size() * 2);
  for (const Step& s : steps_) {
    key.push_back(s.action);
    key.push_back(s.percept);
  }
  return key;
}

namespace {

int IndexOf(const std::vector<std::string>& names, const std::string& name,
            const char* kind) {
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  throw DtlabError(std::string("unknown ") + kind + " '" + name + "'");
}

std::vector<int> ActionKernelKey(int state, const History& h) {
  std::vector<int> key;
  key.push_back(state);
  for (const auto& s : h.steps()) {
    key.push_back(s.action);
    key.push_back(s.percept);
  }
  return key;
}

std::vector<int> PerceptKernelKey(int state, const History& h_with_action) {
  std::vector<int> key = ActionKernelKey(state, h_with_action);
  key.push_back(h_with_action.pending_action());
  return key;
}

}  // namespace

int EnvironmentModel::StateIndex(const std::string& name) const {
  return IndexOf(states, name, "state");
}
int EnvironmentModel::ActionIndex(const std::string& name) const {
  return IndexOf(actions, name, "action");
}
int EnvironmentModel::PerceptIndex(const std::string& name) const {
  return IndexOf(percepts, name, "percept");
}

const std::vector<Rational>& EnvironmentModel::ActionRow(
    int state, const History& h) const {
  auto it = action_kernel.find(ActionKernelKey(state, h));
  if (it == action_kernel.end()) {
    throw DtlabError("missing action kernel row at (" + states[state] + ", '" +
                     HistoryToString(h) + "')");
  }
  return it->second;
}

const std::vector<Rational>& EnvironmentModel::PerceptRow(
    int state, const History& h_with_action) const {
  if (!h_with_action.has_pending_action()) {
    throw DtlabError("percept row lookup requires a pending action");
  }
  auto it = percept_kernel.find(PerceptKernelKey(state, h_with_action));
  if (it == percept_kernel.end()) {
    throw DtlabError("missing percept kernel row at (" + states[state] +
                     ", '" + HistoryToString(h_with_action) + "')");
  }
  return it->second;
}

bool EnvironmentModel::HasActionRow(int state, const History& h) const {
  return action_kernel.count(ActionKernelKey(state, h)) > 0;
}

bool EnvironmentModel::HasPerceptRow(int state,
                                     const History& h_with_action) const {
  return percept_kernel.count(PerceptKernelKey(state, h_with_action)) > 0;
}

std::string EnvironmentModel::HistoryToString(const History& h) const {
  std::ostringstream os;
  bool first = true;
  for (const auto& s : h.steps()) {
    if (!first) os << " ";
    os << actions[s.action] << " " << percepts[s.percept];
    first = false;
  }
  if (h.has_pending_action()) {
    if (!first) os << " ";
    os << actions[h.pending_action()];
  }
  return os.str();
}

History EnvironmentModel::HistoryFromString(const std::string& text) const {
  std::istringstream is(text);
  std::vector<std::string> tokens;
  std::string tok;
  while (is >> tok) tokens.push_back(tok);
  History h;
  size_t i = 0;
  while (i + 1 < tokens.size()) {
    h = h.WithStep(ActionIndex(tokens[i]), PerceptIndex(tokens[i + 1]));
    i += 2;
  }
  if (i < tokens.size()) h = h.WithAction(ActionIndex(tokens[i]));
  return h;
}

ValidationReport Validate(const EnvironmentModel& env) {
  ValidationReport report;
  auto issue = [&report](std::string message) {
    report.issues.push_back({std::move(message)});
  };

  if (env.states.empty()) issue("state alphabet is empty");
  if (env.actions.empty()) issue("action alphabet is empty");
  if (env.percepts.empty()) issue("percept alphabet is empty");
  if (env.lifetime < 1) issue("lifetime must be at least 1");
  if (env.prior.size() != env.states.size()) {
    issue("prior has " + std::to_string(env.prior.size()) + " entries for " +
          std::to_string(env.states.size()) + " states");
  }
  if (env.utility.size() != env.percepts.size()) {
    issue("utility has " + std::to_string(env.utility.size()) +
          " entries for " + std::to_string(env.percepts.size()) + " percepts");
  }
  if (!report.clean()) return report;

  Rational prior_sum(0);
  for (size_t s = 0; s < env.prior.size(); ++s) {
    if (env.prior[s].is_negative()) {
      issue("prior of state " + env.states[s] + " is negative");
    }
    prior_sum += env.prior[s];
  }
  if (prior_sum != Rational(1)) {
    issue("prior sums to " + prior_sum.ToString() + ", expected 1");
  }

  // Walk the state-reachable histories and check every kernel row on them.
  struct Frame {
    int state;
    History history;
  };
  std::vector<Frame> stack;
  for (int s = 0; s < env.num_states(); ++s) {
    if (!env.prior[s].is_zero()) stack.push_back({s, History()});
  }
  while (!stack.empty()) {
    Frame frame = stack.back();
    stack.pop_back();
    if (frame.history.length() >= env.lifetime) continue;
    const int s = frame.state;
    const std::string at =
        "(" + env.states[s] + ", '" + env.HistoryToString(frame.history) + "')";
    if (!env.HasActionRow(s, frame.history)) {
      issue("missing action kernel row at " + at);
      continue;
    }
    const auto& arow = env.ActionRow(s, frame.history);
    if (arow.size() != env.actions.size()) {
      issue("action kernel row at " + at + " has wrong size");
      continue;
    }
    Rational asum(0);
    for (int a = 0; a < env.num_actions(); ++a) {
      if (arow[a].is_negative()) {
        issue("negative action probability at " + at);
      }
      if (arow[a].is_zero()) {
        issue("action-positivity violation: action " + env.actions[a] +
              " has probability 0 at " + at);
      }
      asum += arow[a];
    }
    if (asum != Rational(1)) {
      issue("action kernel row at " + at + " sums to " + asum.ToString() +
            ", expected 1");
    }
    for (int a = 0; a < env.num_actions(); ++a) {
      History ha = frame.history.WithAction(a);
      const std::string pat =
          "(" + env.states[s] + ", '" + env.HistoryToString(ha) + "')";
      if (!env.HasPerceptRow(s, ha)) {
        issue("missing percept kernel row at " + pat);
        continue;
      }
      const auto& prow = env.PerceptRow(s, ha);
      if (prow.size() != env.percepts.size()) {
        issue("percept kernel row at " + pat + " has wrong size");
        continue;
      }
      Rational psum(0);
      for (int e = 0; e < env.num_percepts(); ++e) {
        if (prow[e].is_negative()) {
          issue("negative percept probability at " + pat);
        }
        psum += prow[e];
      }
      if (psum != Rational(1)) {
        issue("percept kernel row at " + pat + " sums to " + psum.ToString() +
              ", expected 1");
      }
      if (arow[a].is_zero()) continue;  // state cannot take this branch
      for (int e = 0; e < env.num_percepts(); ++e) {
        if (!prow[e].is_zero()) stack.push_back({s, ha.WithPercept(e)});
      }
    }
  }

  for (const auto& group : env.infosets) {
    if (group.size() < 2) {
      issue("information set with fewer than two histories");
      continue;
    }
    int len = group.front().length();
    for (const auto& h : group) {
      if (h.has_pending_action()) {
        issue("information set member carries a pending action");
      } else if (h.length() != len) {
        issue("information set mixes histories of different lengths");
      } else if (h.length() >= env.lifetime) {
        issue("information set member '" + env.HistoryToString(h) +
              "' is past the last decision step");
      }
    }
  }
  return report;
}

std::vector<Rational> StateWeights(const EnvironmentModel& env,
                                   const History& h) {
  std::vector<Rational> weights(env.num_states(), Rational(0));
  for (int s = 0; s < env.num_states(); ++s) {
    Rational w = env.prior[s];
    History prefix;
    for (const auto& step : h.steps()) {
      if (w.is_zero()) break;
      w *= env.ActionRow(s, prefix)[step.action];
      if (w.is_zero()) break;
      w *= env.PerceptRow(s, prefix.WithAction(step.action))[step.percept];
      prefix = prefix.WithStep(step.action, step.percept);
    }
    if (!w.is_zero() && h.has_pending_action()) {
      w *= env.ActionRow(s, prefix)[h.pending_action()];
    }
    weights[s] = w;
  }
  return weights;
}

Rational HistoryProbability(const EnvironmentModel& env, const History& h) {
  Rational total(0);
  for (const Rational& w : StateWeights(env, h)) total += w;
  return total;
}

namespace {

std::vector<Rational> NormalizePosterior(const EnvironmentModel& env,
                                         std::vector<Rational> weights,
                                         const History& h) {
  Rational total(0);
  for (const Rational& w : weights) total += w;
  if (total.is_zero()) {
    throw UnreachableHistory("history '" + env.HistoryToString(h) +
                             "' has probability zero");
  }
  for (Rational& w : weights) w /= total;
  return weights;
}

}  // namespace

std::vector<Rational> StatePosterior(const EnvironmentModel& env,
                                     const History& h) {
  return NormalizePosterior(env, StateWeights(env, h), h);
}

AlphabetDistribution NextPerceptGivenAction(const EnvironmentModel& env,
                                            const History& h_with_action) {
  if (!h_with_action.has_pending_action()) {
    throw DtlabError("next-percept query requires a pending action");
  }
  std::vector<Rational> posterior = StatePosterior(env, h_with_action);
  AlphabetDistribution dist(env.num_percepts(), Rational(0));
  for (int s = 0; s < env.num_states(); ++s) {
    if (posterior[s].is_zero()) continue;
    const auto& row = env.PerceptRow(s, h_with_action);
    for (int e = 0; e < env.num_percepts(); ++e) {
      dist[e] += posterior[s] * row[e];
    }
  }
  return dist;
}

AlphabetDistribution NextPerceptDoAction(const EnvironmentModel& env,
                                         const History& h, int action) {
  // Eq-style intervention: the factor mu(a_t | s, h) is deleted, so the
  // state belief stays mu(s | h).
  std::vector<Rational> posterior =
      StatePosterior(env, h.WithoutPendingAction());
  AlphabetDistribution dist(env.num_percepts(), Rational(0));
  for (int s = 0; s < env.num_states(); ++s) {
    if (posterior[s].is_zero()) continue;
    const auto& row =
        env.PerceptRow(s, h.WithoutPendingAction().WithAction(action));
    for (int e = 0; e < env.num_percepts(); ++e) {
      dist[e] += posterior[s] * row[e];
    }
  }
  return dist;
}

namespace {

// Sum over future percept paths of the product of percept factors, with all
// remaining actions fixed by the policy. The action factors are gone: they
// were deleted by the intervention.
Rational InterventionFutureMass(const EnvironmentModel& env, int state,
                                const History& h, const Policy& policy) {
  if (h.length() >= env.lifetime) return Rational(1);
  int action = policy.ActionAt(h);
  const auto& row = env.PerceptRow(state, h.WithAction(action));
  Rational mass(0);
  for (int e = 0; e < env.num_percepts(); ++e) {
    if (row[e].is_zero()) continue;
    mass += row[e] *
            InterventionFutureMass(env, state, h.WithStep(action, e), policy);
  }
  return mass;
}

}  // namespace

AlphabetDistribution NextPerceptDoPolicy(const EnvironmentModel& env,
                                         const History& h,
                                         const Policy& policy) {
  const History base = h.WithoutPendingAction();
  std::vector<Rational> posterior = StatePosterior(env, base);
  const int action = policy.ActionAt(base);
  AlphabetDistribution dist(env.num_percepts(), Rational(0));
  for (int s = 0; s < env.num_states(); ++s) {
    if (posterior[s].is_zero()) continue;
    const auto& row = env.PerceptRow(s, base.WithAction(action));
    for (int e = 0; e < env.num_percepts(); ++e) {
      if (row[e].is_zero()) continue;
      dist[e] += posterior[s] * row[e] *
                 InterventionFutureMass(env, s, base.WithStep(action, e),
                                        policy);
    }
  }
  return dist;
}

namespace {

void ExpandJoint(const EnvironmentModel& env, int state, const History& h,
                 const Rational& weight,
                 std::vector<FiniteDistribution::Entry>* entries) {
  if (h.length() == env.lifetime) {
    Outcome outcome;
    outcome.hidden_state = state;
    for (const auto& step : h.steps()) {
      outcome.trajectory.emplace_back(step.action, step.percept);
    }
    entries->emplace_back(std::move(outcome), weight);
    return;
  }
  const auto& arow = env.ActionRow(state, h);
  for (int a = 0; a < env.num_actions(); ++a) {
    if (arow[a].is_zero()) continue;
    const auto& prow = env.PerceptRow(state, h.WithAction(a));
    for (int e = 0; e < env.num_percepts(); ++e) {
      if (prow[e].is_zero()) continue;
      ExpandJoint(env, state, h.WithStep(a, e), weight * arow[a] * prow[e],
                  entries);
    }
  }
}

}  // namespace

FiniteDistribution Joint(const EnvironmentModel& env) {
  std::vector<FiniteDistribution::Entry> entries;
  for (int s = 0; s < env.num_states(); ++s) {
    if (env.prior[s].is_zero()) continue;
    ExpandJoint(env, s, History(), env.prior[s], &entries);
  }
  return FiniteDistribution::FromSupport(std::move(entries));
}

std::vector<History> ReachableHistories(const EnvironmentModel& env,
                                        int length) {
  std::vector<History> level = {History()};
  for (int t = 0; t < length; ++t) {
    std::vector<History> next;
    for (const History& h : level) {
      for (int a = 0; a < env.num_actions(); ++a) {
        AlphabetDistribution dist = NextPerceptGivenAction(env, h.WithAction(a));
        for (int e = 0; e < env.num_percepts(); ++e) {
          if (!dist[e].is_zero()) next.push_back(h.WithStep(a, e));
        }
      }
    }
    level = std::move(next);
  }
  std::sort(level.begin(), level.end());
  return level;
}

std::vector<History> AllDecisionHistories(const EnvironmentModel& env) {
  std::vector<History> all;
  for (int len = 0; len < env.lifetime; ++len) {
    std::vector<History> level = ReachableHistories(env, len);
    all.insert(all.end(), level.begin(), level.end());
  }
  return all;
}

EnvironmentModel CollapseHiddenState(const EnvironmentModel& env) {
  EnvironmentModel out;
  out.states = {"s0"};
  out.actions = env.actions;
  out.percepts = env.percepts;
  out.lifetime = env.lifetime;
  out.prior = {Rational(1)};
  out.utility = env.utility;
  out.infosets = env.infosets;

  std::vector<History> frontier = {History()};
  while (!frontier.empty()) {
    std::vector<History> next;
    for (const History& h : frontier) {
      if (h.length() >= env.lifetime) continue;
      std::vector<Rational> posterior = StatePosterior(env, h);
      std::vector<Rational> arow(env.num_actions(), Rational(0));
      for (int s = 0; s < env.num_states(); ++s) {
        if (posterior[s].is_zero()) continue;
        const auto& row = env.ActionRow(s, h);
        for (int a = 0; a < env.num_actions(); ++a) {
          arow[a] += posterior[s] * row[a];
        }
      }
      std::vector<int> akey = {0};
      for (int v : h.Key()) akey.push_back(v);
      out.action_kernel[akey] = arow;
      for (int a = 0; a < env.num_actions(); ++a) {
        AlphabetDistribution prow =
            NextPerceptGivenAction(env, h.WithAction(a));
        std::vector<int> pkey = akey;
        pkey.push_back(a);
        out.percept_kernel[pkey] = prow;
        for (int e = 0; e < env.num_percepts(); ++e) {
          if (!prow[e].is_zero()) next.push_back(h.WithStep(a, e));
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace dtlab
