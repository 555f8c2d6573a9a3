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

#include "dtlab/distribution.h"

#include <algorithm>
#include <set>

#include "dtlab/errors.h"

namespace dtlab {

Event& Event::RequireState(int state) {
  if (state_.has_value() && *state_ != state) unsatisfiable_ = true;
  state_ = state;
  return *this;
}

Event& Event::RequireAction(int step, int action) {
  auto [it, inserted] = actions_.emplace(step, action);
  if (!inserted && it->second != action) unsatisfiable_ = true;
  return *this;
}

Event& Event::RequirePercept(int step, int percept) {
  auto [it, inserted] = percepts_.emplace(step, percept);
  if (!inserted && it->second != percept) unsatisfiable_ = true;
  return *this;
}

Event Event::And(const Event& other) const {
  Event result = *this;
  if (other.state_.has_value()) result.RequireState(*other.state_);
  for (const auto& [step, a] : other.actions_) result.RequireAction(step, a);
  for (const auto& [step, e] : other.percepts_) result.RequirePercept(step, e);
  if (other.unsatisfiable_) result.unsatisfiable_ = true;
  return result;
}

bool Event::Matches(const Outcome& outcome) const {
  if (unsatisfiable_) return false;
  if (state_.has_value() && outcome.hidden_state != *state_) return false;
  for (const auto& [step, action] : actions_) {
    if (step < 1 || step > static_cast<int>(outcome.trajectory.size()))
      return false;
    if (outcome.trajectory[step - 1].first != action) return false;
  }
  for (const auto& [step, percept] : percepts_) {
    if (step < 1 || step > static_cast<int>(outcome.trajectory.size()))
      return false;
    if (outcome.trajectory[step - 1].second != percept) return false;
  }
  return true;
}

int Event::MaxStep() const {
  int max_step = 0;
  if (!actions_.empty()) max_step = std::max(max_step, actions_.rbegin()->first);
  if (!percepts_.empty())
    max_step = std::max(max_step, percepts_.rbegin()->first);
  return max_step;
}

FiniteDistribution FiniteDistribution::FromSupport(std::vector<Entry> entries) {
  std::vector<Entry> kept;
  kept.reserve(entries.size());
  Rational total(0);
  for (auto& [outcome, p] : entries) {
    if (p.is_negative()) {
      throw DtlabError("distribution entry with negative probability");
    }
    total += p;
    if (!p.is_zero()) kept.emplace_back(std::move(outcome), std::move(p));
  }
  if (total != Rational(1)) {
    throw DtlabError("distribution probabilities sum to " + total.ToString() +
                     ", expected 1");
  }
  std::sort(kept.begin(), kept.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (size_t i = 1; i < kept.size(); ++i) {
    if (kept[i - 1].first == kept[i].first) {
      throw DtlabError("duplicate outcome in distribution support");
    }
  }
  return FiniteDistribution(std::move(kept));
}

Rational Marginal(const FiniteDistribution& dist, const Event& event) {
  Rational sum(0);
  for (const auto& [outcome, p] : dist.support()) {
    if (event.Matches(outcome)) sum += p;
  }
  return sum;
}

FiniteDistribution Condition(const FiniteDistribution& dist,
                             const Event& event) {
  Rational mass = Marginal(dist, event);
  if (mass.is_zero()) {
    throw ZeroProbabilityEvent("conditioning on an event of measure zero");
  }
  std::vector<FiniteDistribution::Entry> entries;
  for (const auto& [outcome, p] : dist.support()) {
    if (event.Matches(outcome)) entries.emplace_back(outcome, p / mass);
  }
  return FiniteDistribution::FromSupport(std::move(entries));
}

Rational Expectation(const FiniteDistribution& dist,
                     const std::function<Rational(const Outcome&)>& f) {
  Rational sum(0);
  for (const auto& [outcome, p] : dist.support()) {
    sum += p * f(outcome);
  }
  return sum;
}

}  // namespace dtlab
