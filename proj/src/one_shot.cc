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

#include "dtlab/one_shot.h"

#include "dtlab/errors.h"

namespace dtlab {

std::string OneShotTheoryName(OneShotTheory theory) {
  switch (theory) {
    case OneShotTheory::kSdt: return "sdt";
    case OneShotTheory::kEdt: return "edt";
    case OneShotTheory::kCdt: return "cdt";
  }
  throw DtlabError("unknown one-shot theory");
}

OneShotTheory OneShotTheoryFromName(const std::string& name) {
  if (name == "sdt") return OneShotTheory::kSdt;
  if (name == "edt") return OneShotTheory::kEdt;
  if (name == "cdt") return OneShotTheory::kCdt;
  throw DtlabError("unknown one-shot theory '" + name + "'");
}

OneShotProblem MakeOneShot(EnvironmentModel env) {
  if (env.lifetime != 1) {
    throw DtlabError("one-shot decision requires a lifetime-1 environment; "
                     "got lifetime " + std::to_string(env.lifetime));
  }
  return OneShotProblem{std::move(env), std::nullopt};
}

OneShotProblem ProjectToStep(const EnvironmentModel& env,
                             const History& history) {
  const History base = history.WithoutPendingAction();
  if (base.length() >= env.lifetime) {
    throw DtlabError("history is past the last decision step");
  }
  std::vector<Rational> posterior = StatePosterior(env, base);

  EnvironmentModel out;
  out.states = env.states;
  out.actions = env.actions;
  out.percepts = env.percepts;
  out.lifetime = 1;
  out.prior = posterior;
  out.utility = env.utility;
  for (int s = 0; s < env.num_states(); ++s) {
    if (posterior[s].is_zero()) continue;
    out.action_kernel[{s}] = env.ActionRow(s, base);
    for (int a = 0; a < env.num_actions(); ++a) {
      out.percept_kernel[{s, a}] = env.PerceptRow(s, base.WithAction(a));
    }
  }
  // States ruled out by the history keep placeholder uniform rows so the
  // projected model still validates; they carry zero prior mass.
  for (int s = 0; s < env.num_states(); ++s) {
    if (!posterior[s].is_zero()) continue;
    std::vector<Rational> uniform_a(env.num_actions(),
                                    Rational(1, env.num_actions()));
    out.action_kernel[{s}] = uniform_a;
    std::vector<Rational> uniform_e(env.num_percepts(),
                                    Rational(1, env.num_percepts()));
    for (int a = 0; a < env.num_actions(); ++a) {
      out.percept_kernel[{s, a}] = uniform_e;
    }
  }
  return OneShotProblem{std::move(out), std::nullopt};
}

namespace {

DecisionReport ReportFromValues(OneShotTheory theory,
                                std::vector<Rational> values) {
  DecisionReport report;
  report.theory = theory;
  report.values = std::move(values);
  Rational best = report.values[0];
  for (const Rational& v : report.values) {
    if (v > best) best = v;
  }
  for (size_t a = 0; a < report.values.size(); ++a) {
    if (report.values[a] == best) {
      report.best_actions.push_back(static_cast<int>(a));
    }
  }
  return report;
}

Rational FamilyValue(const EnvironmentModel& env,
                     const AlphabetDistribution& pa) {
  Rational value(0);
  for (int e = 0; e < env.num_percepts(); ++e) {
    value += pa[e] * env.utility[e];
  }
  return value;
}

}  // namespace

std::vector<AlphabetDistribution> EvidentialFamily(
    const OneShotProblem& problem) {
  std::vector<AlphabetDistribution> family;
  for (int a = 0; a < problem.env.num_actions(); ++a) {
    family.push_back(
        NextPerceptGivenAction(problem.env, History().WithAction(a)));
  }
  return family;
}

std::vector<AlphabetDistribution> CausalFamily(const OneShotProblem& problem) {
  std::vector<AlphabetDistribution> family;
  for (int a = 0; a < problem.env.num_actions(); ++a) {
    family.push_back(NextPerceptDoAction(problem.env, History(), a));
  }
  return family;
}

DecisionReport SdtDecide(const OneShotProblem& problem) {
  if (!problem.percept_family.has_value()) {
    throw MissingPerceptFamily(
        "sdt needs an explicit percept distribution P_a for every action; "
        "none was provided (derive one with --pa-from evidential|causal|file)");
  }
  const auto& family = *problem.percept_family;
  if (family.size() != static_cast<size_t>(problem.env.num_actions())) {
    throw MissingPerceptFamily(
        "percept family does not cover every action");
  }
  std::vector<Rational> values;
  for (int a = 0; a < problem.env.num_actions(); ++a) {
    values.push_back(FamilyValue(problem.env, family[a]));
  }
  return ReportFromValues(OneShotTheory::kSdt, std::move(values));
}

DecisionReport EdtDecide(const OneShotProblem& problem) {
  std::vector<Rational> values;
  for (const auto& pa : EvidentialFamily(problem)) {
    values.push_back(FamilyValue(problem.env, pa));
  }
  return ReportFromValues(OneShotTheory::kEdt, std::move(values));
}

DecisionReport CdtDecide(const OneShotProblem& problem) {
  std::vector<Rational> values;
  for (const auto& pa : CausalFamily(problem)) {
    values.push_back(FamilyValue(problem.env, pa));
  }
  return ReportFromValues(OneShotTheory::kCdt, std::move(values));
}

}  // namespace dtlab
