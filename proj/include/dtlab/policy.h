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

#ifndef DTLAB_POLICY_H_
#define DTLAB_POLICY_H_

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dtlab/environment.h"

namespace dtlab {

// The decision points of an environment: every mu-positive observable
// history before the last step, merged into groups by the environment's
// declared information sets. Points are in breadth-first order (by length,
// then by the smallest member history), which is also the order used for
// lexicographic policy comparison.
class DecisionPointSet {
 public:
  static std::shared_ptr<const DecisionPointSet> Compute(
      const EnvironmentModel& env);

  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<History>& histories(int point) const {
    return points_[point];
  }
  const History& representative(int point) const { return points_[point][0]; }

  // Index of the point containing the history; -1 when the history is not a
  // decision point (unreachable or past the horizon).
  int PointOf(const History& h) const;

 private:
  std::vector<std::vector<History>> points_;
  std::map<std::vector<int>, int> index_;
};

// A deterministic policy: an action per decision point, measurable with
// respect to the environment's information sets by construction. Entries may
// be left undefined while a policy is being built or enumerated behaviorally;
// evaluation through an undefined entry throws.
class Policy {
 public:
  explicit Policy(std::shared_ptr<const DecisionPointSet> points)
      : points_(std::move(points)),
        choice_(points_->size(), kUndefined) {}
  Policy(std::shared_ptr<const DecisionPointSet> points,
         std::vector<int> choice);

  static constexpr int kUndefined = -1;

  const DecisionPointSet& points() const { return *points_; }
  std::shared_ptr<const DecisionPointSet> points_ptr() const { return points_; }

  int ActionAt(const History& h) const;
  bool DefinedAt(const History& h) const;
  int ActionAtPoint(int point) const { return choice_[point]; }
  void SetPoint(int point, int action) { choice_[point] = action; }
  const std::vector<int>& choice() const { return choice_; }

  bool total() const;

  // Decision points actually visited when the policy is followed from the
  // empty history, in breadth-first order.
  std::vector<int> OnPolicyPoints(const EnvironmentModel& env) const;

  // Restriction to the on-policy points; used to group behaviorally
  // equivalent policies.
  std::vector<std::pair<int, int>> BehavioralSignature(
      const EnvironmentModel& env) const;

  friend bool operator==(const Policy& a, const Policy& b) {
    return a.choice_ == b.choice_;
  }
  friend bool operator<(const Policy& a, const Policy& b) {
    return a.choice_ < b.choice_;
  }

 private:
  std::shared_ptr<const DecisionPointSet> points_;
  std::vector<int> choice_;  // action id per point, kUndefined where unset
};

// Builds a policy from (history, action) pairs given as alphabet names.
// Conflicting assignments within one information set and unknown histories
// are errors; `require_total` additionally demands every point be covered.
Policy PolicyFromAssignments(
    const EnvironmentModel& env,
    std::shared_ptr<const DecisionPointSet> points,
    const std::vector<std::pair<std::string, std::string>>& assignments,
    bool require_total);

// Parses a policy file: one `<history> -> <action>` line per decision point
// (empty left side for the first decision), `#` comments.
Policy PolicyFromFileText(const EnvironmentModel& env,
                          std::shared_ptr<const DecisionPointSet> points,
                          const std::string& text);

}  // namespace dtlab

#endif  // DTLAB_POLICY_H_
