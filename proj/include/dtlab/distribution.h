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

#ifndef DTLAB_DISTRIBUTION_H_
#define DTLAB_DISTRIBUTION_H_

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dtlab/rational.h"

namespace dtlab {

// A point of the joint distribution: a hidden state together with a full
// action/percept trajectory of the model's lifetime.
struct Outcome {
  int hidden_state = 0;
  std::vector<std::pair<int, int>> trajectory;  // (action, percept) per step

  friend bool operator==(const Outcome& a, const Outcome& b) {
    return a.hidden_state == b.hidden_state && a.trajectory == b.trajectory;
  }
  friend bool operator<(const Outcome& a, const Outcome& b) {
    if (a.hidden_state != b.hidden_state) return a.hidden_state < b.hidden_state;
    return a.trajectory < b.trajectory;
  }
};

// A conjunction of atomic constraints on an outcome: the hidden state, the
// action at a step, the percept at a step. Steps are 1-based. Disjunction is
// expressed by summing marginals of several events.
class Event {
 public:
  static Event Always() { return Event(); }

  Event& RequireState(int state);
  Event& RequireAction(int step, int action);
  Event& RequirePercept(int step, int percept);

  // Conjunction of two events. Contradictory constraints produce an event
  // that matches nothing.
  Event And(const Event& other) const;

  bool Matches(const Outcome& outcome) const;

  // Largest step index referenced, 0 when only the state is constrained.
  int MaxStep() const;

  bool unsatisfiable() const { return unsatisfiable_; }

 private:
  std::optional<int> state_;
  std::map<int, int> actions_;   // step -> action id
  std::map<int, int> percepts_;  // step -> percept id
  bool unsatisfiable_ = false;
};

// An explicit finite distribution over outcomes. Entries are distinct,
// probabilities are nonnegative and sum to exactly one; zero-probability
// entries are dropped on construction.
class FiniteDistribution {
 public:
  using Entry = std::pair<Outcome, Rational>;

  // Validates the invariants; throws DtlabError when they fail.
  static FiniteDistribution FromSupport(std::vector<Entry> entries);

  const std::vector<Entry>& support() const { return support_; }

 private:
  explicit FiniteDistribution(std::vector<Entry> entries)
      : support_(std::move(entries)) {}
  std::vector<Entry> support_;
};

// Total probability of the event, exactly.
Rational Marginal(const FiniteDistribution& dist, const Event& event);

// Renormalized restriction of the distribution to the event. Throws
// ZeroProbabilityEvent when the event has measure zero.
FiniteDistribution Condition(const FiniteDistribution& dist, const Event& event);

// Sum of p(o) * f(o) over the support, exactly.
Rational Expectation(const FiniteDistribution& dist,
                     const std::function<Rational(const Outcome&)>& f);

}  // namespace dtlab

#endif  // DTLAB_DISTRIBUTION_H_
