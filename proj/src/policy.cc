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

#include "dtlab/policy.h"

#include <algorithm>
#include <sstream>

#include "dtlab/errors.h"

namespace dtlab {

std::shared_ptr<const DecisionPointSet> DecisionPointSet::Compute(
    const EnvironmentModel& env) {
  auto set = std::make_shared<DecisionPointSet>();

  // Group id per history key; histories not covered by a declared
  // information set form singletons.
  std::map<std::vector<int>, int> group_of;
  std::vector<std::vector<History>> groups;
  auto group_for = [&](const History& h) -> int {
    auto it = group_of.find(h.Key());
    if (it != group_of.end()) return it->second;
    group_of[h.Key()] = static_cast<int>(groups.size());
    groups.push_back({h});
    return static_cast<int>(groups.size()) - 1;
  };

  std::vector<History> all = AllDecisionHistories(env);
  std::map<std::vector<int>, bool> reachable;
  for (const History& h : all) reachable[h.Key()] = true;

  for (const auto& declared : env.infosets) {
    int target = -1;
    for (const History& h : declared) {
      if (!reachable.count(h.Key())) {
        throw DtlabError("information set member '" + env.HistoryToString(h) +
                         "' is not a reachable decision point");
      }
      int g = group_for(h);
      if (target == -1) {
        target = g;
      } else if (g != target) {
        // Merge group g into target.
        for (const History& member : groups[g]) {
          group_of[member.Key()] = target;
          groups[target].push_back(member);
        }
        groups[g].clear();
      }
    }
  }
  for (const History& h : all) group_for(h);

  // Breadth-first order: by member length, then smallest member key.
  std::vector<std::vector<History>> points;
  for (auto& group : groups) {
    if (group.empty()) continue;
    std::sort(group.begin(), group.end());
    points.push_back(std::move(group));
  }
  std::sort(points.begin(), points.end(),
            [](const std::vector<History>& a, const std::vector<History>& b) {
              if (a[0].length() != b[0].length())
                return a[0].length() < b[0].length();
              return a[0] < b[0];
            });

  set->points_ = std::move(points);
  for (int i = 0; i < set->size(); ++i) {
    for (const History& h : set->points_[i]) {
      set->index_[h.Key()] = i;
    }
  }
  return set;
}

int DecisionPointSet::PointOf(const History& h) const {
  auto it = index_.find(h.WithoutPendingAction().Key());
  return it == index_.end() ? -1 : it->second;
}

Policy::Policy(std::shared_ptr<const DecisionPointSet> points,
               std::vector<int> choice)
    : points_(std::move(points)), choice_(std::move(choice)) {
  if (static_cast<int>(choice_.size()) != points_->size()) {
    throw DtlabError("policy choice vector does not match decision points");
  }
}

int Policy::ActionAt(const History& h) const {
  int point = points_->PointOf(h);
  if (point < 0) {
    throw DtlabError("no decision point at history");
  }
  if (choice_[point] == kUndefined) {
    throw DtlabError("policy is undefined at a queried decision point");
  }
  return choice_[point];
}

bool Policy::DefinedAt(const History& h) const {
  int point = points_->PointOf(h);
  return point >= 0 && choice_[point] != kUndefined;
}

bool Policy::total() const {
  return std::none_of(choice_.begin(), choice_.end(),
                      [](int a) { return a == kUndefined; });
}

std::vector<int> Policy::OnPolicyPoints(const EnvironmentModel& env) const {
  std::vector<bool> seen(points_->size(), false);
  std::vector<History> frontier = {History()};
  while (!frontier.empty()) {
    std::vector<History> next;
    for (const History& h : frontier) {
      if (h.length() >= env.lifetime) continue;
      int point = points_->PointOf(h);
      if (point < 0) continue;
      seen[point] = true;
      int action = choice_[point];
      if (action == kUndefined) {
        throw DtlabError("policy is undefined at an on-policy decision point");
      }
      AlphabetDistribution dist =
          NextPerceptGivenAction(env, h.WithAction(action));
      for (int e = 0; e < env.num_percepts(); ++e) {
        if (!dist[e].is_zero()) next.push_back(h.WithStep(action, e));
      }
    }
    frontier = std::move(next);
  }
  std::vector<int> points;
  for (int i = 0; i < points_->size(); ++i) {
    if (seen[i]) points.push_back(i);
  }
  return points;
}

std::vector<std::pair<int, int>> Policy::BehavioralSignature(
    const EnvironmentModel& env) const {
  std::vector<std::pair<int, int>> signature;
  for (int point : OnPolicyPoints(env)) {
    signature.emplace_back(point, choice_[point]);
  }
  return signature;
}

Policy PolicyFromAssignments(
    const EnvironmentModel& env,
    std::shared_ptr<const DecisionPointSet> points,
    const std::vector<std::pair<std::string, std::string>>& assignments,
    bool require_total) {
  Policy policy(points);
  for (const auto& [history_text, action_name] : assignments) {
    History h = env.HistoryFromString(history_text);
    int point = points->PointOf(h);
    if (point < 0) {
      throw DtlabError("'" + history_text + "' is not a decision point");
    }
    int action = env.ActionIndex(action_name);
    int existing = policy.ActionAtPoint(point);
    if (existing != Policy::kUndefined && existing != action) {
      throw DtlabError(
          "conflicting actions for the information set containing '" +
          history_text + "'");
    }
    policy.SetPoint(point, action);
  }
  if (require_total && !policy.total()) {
    throw DtlabError("policy leaves some decision points unassigned");
  }
  return policy;
}

Policy PolicyFromFileText(const EnvironmentModel& env,
                          std::shared_ptr<const DecisionPointSet> points,
                          const std::string& text) {
  std::vector<std::pair<std::string, std::string>> assignments;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto arrow = line.find("->");
    if (arrow == std::string::npos) {
      throw DtlabError("policy file line " + std::to_string(line_no) +
                       ": expected '<history> -> <action>'");
    }
    std::string lhs = line.substr(0, arrow);
    std::string rhs = line.substr(arrow + 2);
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    assignments.emplace_back(trim(lhs), trim(rhs));
  }
  return PolicyFromAssignments(env, std::move(points), assignments,
                               /*require_total=*/true);
}

}  // namespace dtlab
