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

#include "dtlab/library.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "dtlab/errors.h"

namespace dtlab {

namespace {

Rational Param(const ParamMap& params, const LibraryEntry& entry,
               const std::string& name) {
  auto it = params.find(name);
  if (it != params.end()) return it->second;
  for (const auto& doc : entry.parameters) {
    if (doc.name == name) return doc.default_value;
  }
  throw ParameterOutOfDomain("parameter '" + name + "' has no default");
}

void RequireOpenUnitInterval(const std::string& name, const Rational& value) {
  if (value <= Rational(0) || value >= Rational(1)) {
    throw ParameterOutOfDomain("parameter '" + name + "' = " +
                               value.ToString() +
                               " is outside the open interval (0, 1)");
  }
}

void CheckKnownParams(const LibraryEntry& entry, const ParamMap& params) {
  for (const auto& [name, value] : params) {
    bool known = false;
    for (const auto& doc : entry.parameters) {
      if (doc.name == name) known = true;
    }
    if (!known) {
      throw ParameterOutOfDomain("environment '" + entry.name +
                                 "' has no parameter '" + name + "'");
    }
  }
}

// Key builders. Kernel keys are [state, a1, e1, ...] for action rows and the
// same with the next action appended for percept rows.
std::vector<int> AKey(int s, std::initializer_list<int> history) {
  std::vector<int> key = {s};
  key.insert(key.end(), history);
  return key;
}

std::vector<int> PKey(int s, std::initializer_list<int> history, int action) {
  std::vector<int> key = AKey(s, history);
  key.push_back(action);
  return key;
}

std::vector<Rational> PointMass(int size, int index) {
  std::vector<Rational> row(size, Rational(0));
  row[index] = Rational(1);
  return row;
}

EnvironmentModel BuildNewcomb(const LibraryEntry& entry,
                              const ParamMap& params) {
  Rational eps = Param(params, entry, "eps");
  Rational p_empty = Param(params, entry, "p_empty");
  RequireOpenUnitInterval("eps", eps);
  RequireOpenUnitInterval("p_empty", p_empty);

  EnvironmentModel env;
  env.states = {"E", "F"};
  env.actions = {"B1", "B2"};
  env.percepts = {"O_0", "O_T", "O_M", "O_MT"};
  env.lifetime = 1;
  env.prior = {p_empty, Rational(1) - p_empty};
  env.utility = {Rational(0), Rational(1000), Rational(1000000),
                 Rational(1001000)};
  const int E = 0, F = 1, B1 = 0, B2 = 1;
  const int O0 = 0, OT = 1, OM = 2, OMT = 3;
  // The predictor is accurate with probability 1 - eps: an empty box means a
  // two-boxer was predicted.
  env.action_kernel[AKey(E, {})] = {eps, Rational(1) - eps};
  env.action_kernel[AKey(F, {})] = {Rational(1) - eps, eps};
  env.percept_kernel[PKey(E, {}, B1)] = PointMass(4, O0);
  env.percept_kernel[PKey(E, {}, B2)] = PointMass(4, OT);
  env.percept_kernel[PKey(F, {}, B1)] = PointMass(4, OM);
  env.percept_kernel[PKey(F, {}, B2)] = PointMass(4, OMT);
  return env;
}

EnvironmentModel BuildToxoplasmosis(const LibraryEntry&, const ParamMap&) {
  EnvironmentModel env;
  env.states = {"T", "H"};
  env.actions = {"P", "N"};
  env.percepts = {"PT", "NT", "PH", "NH"};
  env.lifetime = 1;
  env.prior = {Rational(1, 2), Rational(1, 2)};
  env.utility = {Rational(-9), Rational(-10), Rational(1), Rational(0)};
  const int T = 0, H = 1, P = 0, N = 1;
  const int PT = 0, NT = 1, PH = 2, NH = 3;
  // Infected agents pet with probability 0.8, healthy ones with 0.2.
  env.action_kernel[AKey(T, {})] = {Rational(4, 5), Rational(1, 5)};
  env.action_kernel[AKey(H, {})] = {Rational(1, 5), Rational(4, 5)};
  env.percept_kernel[PKey(T, {}, P)] = PointMass(4, PT);
  env.percept_kernel[PKey(T, {}, N)] = PointMass(4, NT);
  env.percept_kernel[PKey(H, {}, P)] = PointMass(4, PH);
  env.percept_kernel[PKey(H, {}, N)] = PointMass(4, NH);
  return env;
}

EnvironmentModel BuildNewcombLooking(const LibraryEntry& entry,
                                     const ParamMap& params) {
  Rational eps = Param(params, entry, "eps");
  RequireOpenUnitInterval("eps", eps);

  EnvironmentModel env;
  env.states = {"E", "F"};
  env.actions = {"B1", "B2"};  // step 1: B1 = look, B2 = don't look
  env.percepts = {"E", "F", "Z", "O_0", "O_T", "O_M", "O_MT"};
  env.lifetime = 2;
  env.prior = {Rational(1, 2), Rational(1, 2)};
  env.utility = {Rational(0), Rational(0),       Rational(0),
                 Rational(0), Rational(1000),    Rational(1000000),
                 Rational(1001000)};
  const int E = 0, F = 1, B1 = 0, B2 = 1;
  const int PE = 0, PF = 1, Z = 2, O0 = 3, OT = 4, OM = 5, OMT = 6;
  const int NP = 7;  // number of percepts
  const Rational half(1, 2);

  for (int s : {E, F}) {
    env.action_kernel[AKey(s, {})] = {half, half};
  }
  // Looking reveals the box; not looking yields the blank percept.
  env.percept_kernel[PKey(E, {}, B1)] = PointMass(NP, PE);
  env.percept_kernel[PKey(F, {}, B1)] = PointMass(NP, PF);
  env.percept_kernel[PKey(E, {}, B2)] = PointMass(NP, Z);
  env.percept_kernel[PKey(F, {}, B2)] = PointMass(NP, Z);

  // Step 2: the prediction is about the final box choice, whatever happened
  // at step 1.
  std::vector<Rational> predicts_one = {Rational(1) - eps, eps};
  std::vector<Rational> predicts_two = {eps, Rational(1) - eps};
  struct Branch { int state; int a1; int e1; };
  const std::vector<Branch> branches = {
      {E, B1, PE}, {E, B2, Z}, {F, B1, PF}, {F, B2, Z}};
  for (const Branch& b : branches) {
    env.action_kernel[AKey(b.state, {b.a1, b.e1})] =
        b.state == F ? predicts_one : predicts_two;
    env.percept_kernel[PKey(b.state, {b.a1, b.e1}, B1)] =
        PointMass(NP, b.state == F ? OM : O0);
    env.percept_kernel[PKey(b.state, {b.a1, b.e1}, B2)] =
        PointMass(NP, b.state == F ? OMT : OT);
  }
  return env;
}

EnvironmentModel BuildNewcombPrecommit(const LibraryEntry& entry,
                                       const ParamMap& params) {
  Rational eps = Param(params, entry, "eps");
  RequireOpenUnitInterval("eps", eps);

  EnvironmentModel env;
  env.states = {"E", "F"};
  env.actions = {"B1", "B2"};  // step 1: B1 = sign, B2 = don't sign
  env.percepts = {"C", "Z", "O_0", "O_T", "O_nT", "O_M", "O_MT", "O_MnT"};
  env.lifetime = 2;
  env.prior = {Rational(1, 2), Rational(1, 2)};
  env.utility = {Rational(-300000), Rational(0),       Rational(0),
                 Rational(1000),    Rational(-1000),   Rational(1000000),
                 Rational(1001000), Rational(999000)};
  const int E = 0, F = 1, B1 = 0, B2 = 1;
  const int C = 0, Z = 1, O0 = 2, OT = 3, OM = 5, OMT = 6, OMnT = 7;
  const int NP = 8;
  const Rational half(1, 2);

  for (int s : {E, F}) {
    env.action_kernel[AKey(s, {})] = {half, half};
    env.percept_kernel[PKey(s, {}, B1)] = PointMass(NP, C);
    env.percept_kernel[PKey(s, {}, B2)] = PointMass(NP, Z);
    // Signing updates the prediction to one-boxing; the box will be full.
    env.action_kernel[AKey(s, {B1, C})] = {Rational(1) - eps, eps};
    env.percept_kernel[PKey(s, {B1, C}, B1)] = PointMass(NP, OM);
    env.percept_kernel[PKey(s, {B1, C}, B2)] = PointMass(NP, OMnT);
  }
  env.action_kernel[AKey(E, {B2, Z})] = {eps, Rational(1) - eps};
  env.action_kernel[AKey(F, {B2, Z})] = {Rational(1) - eps, eps};
  env.percept_kernel[PKey(E, {B2, Z}, B1)] = PointMass(NP, O0);
  env.percept_kernel[PKey(E, {B2, Z}, B2)] = PointMass(NP, OT);
  env.percept_kernel[PKey(F, {B2, Z}, B1)] = PointMass(NP, OM);
  env.percept_kernel[PKey(F, {B2, Z}, B2)] = PointMass(NP, OMT);
  return env;
}

EnvironmentModel BuildSeqToxoplasmosis(const LibraryEntry&, const ParamMap&) {
  EnvironmentModel env;
  env.states = {"T", "H"};
  env.actions = {"Y", "N"};  // step 1: see the doctor / don't
  env.percepts = {"C", "K", "S", "s", "P", "Z"};
  env.lifetime = 2;
  env.prior = {Rational(1, 2), Rational(1, 2)};
  env.utility = {Rational(-4), Rational(0), Rational(-10),
                 Rational(-9), Rational(1), Rational(0)};
  const int T = 0, H = 1, Y = 0, N = 1;
  const int C = 0, K = 1, S = 2, ss = 3, P = 4, Z = 5;
  const int NP = 6;
  const Rational half(1, 2);

  for (int s : {T, H}) {
    env.action_kernel[AKey(s, {})] = {half, half};
    env.percept_kernel[PKey(s, {}, Y)] = PointMass(NP, C);
  }
  // Skipping the doctor: an infected agent meets the kitten with probability
  // 0.2 and falls sick otherwise; a healthy agent always meets it.
  env.percept_kernel[PKey(T, {}, N)] = [&] {
    std::vector<Rational> row(NP, Rational(0));
    row[K] = Rational(1, 5);
    row[S] = Rational(4, 5);
    return row;
  }();
  env.percept_kernel[PKey(H, {}, N)] = PointMass(NP, K);

  // Facing the kitten, infected agents pet with probability 0.8, healthy
  // ones with 0.2.
  env.action_kernel[AKey(T, {N, K})] = {Rational(4, 5), Rational(1, 5)};
  env.action_kernel[AKey(H, {N, K})] = {Rational(1, 5), Rational(4, 5)};
  env.percept_kernel[PKey(T, {N, K}, Y)] = PointMass(NP, ss);
  env.percept_kernel[PKey(T, {N, K}, N)] = PointMass(NP, S);
  env.percept_kernel[PKey(H, {N, K}, Y)] = PointMass(NP, P);
  env.percept_kernel[PKey(H, {N, K}, N)] = PointMass(NP, Z);

  // Padding steps after a resolved first percept: nothing further happens.
  for (int s : {T, H}) {
    env.action_kernel[AKey(s, {Y, C})] = {half, half};
    env.percept_kernel[PKey(s, {Y, C}, Y)] = PointMass(NP, Z);
    env.percept_kernel[PKey(s, {Y, C}, N)] = PointMass(NP, Z);
  }
  env.action_kernel[AKey(T, {N, S})] = {half, half};
  env.percept_kernel[PKey(T, {N, S}, Y)] = PointMass(NP, Z);
  env.percept_kernel[PKey(T, {N, S}, N)] = PointMass(NP, Z);
  return env;
}

std::vector<LibraryEntry> MakeCatalog() {
  std::vector<LibraryEntry> catalog;

  {
    LibraryEntry e;
    e.name = "newcomb";
    e.summary =
        "Two boxes, one opaque; a predictor fills the opaque box if and only "
        "if it predicts one-boxing. eps is the predictor's error rate.";
    e.parameters = {{"eps", Rational(1, 100), "0 < eps < 1"},
                    {"p_empty", Rational(1, 2), "0 < p_empty < 1"}};
    e.policies = {{"one_box", "One-boxer", {{"", "B1"}}},
                  {"two_box", "Two-boxer", {{"", "B2"}}}};
    e.slots = {{"box", {""}, {{"B1", "1-box"}, {"B2", "2-box"}}}};
    catalog.push_back(std::move(e));
  }
  {
    LibraryEntry e;
    e.name = "toxoplasmosis";
    e.summary =
        "A parasite makes its hosts both sick and more likely to pet a "
        "kitten; petting is pleasant but is evidence of infection.";
    e.policies = {{"pet", "Petter", {{"", "P"}}},
                  {"no_pet", "Non-petter", {{"", "N"}}}};
    e.slots = {{"pet", {""}, {{"P", "pet"}, {"N", "not pet"}}}};
    catalog.push_back(std::move(e));
  }
  {
    LibraryEntry e;
    e.name = "newcomb_looking";
    e.summary =
        "Newcomb where the agent may peek into the opaque box before "
        "choosing; the prediction concerns the final box choice.";
    e.parameters = {{"eps", Rational(1, 100), "0 < eps < 1"}};
    e.policies = {
        {"curious_one_boxer",
         "Curious one-boxer",
         {{"", "B1"}, {"B1 E", "B1"}, {"B1 F", "B1"}, {"B2 Z", "B1"}}},
        {"curious_two_boxer",
         "Curious two-boxer",
         {{"", "B1"}, {"B1 E", "B2"}, {"B1 F", "B2"}, {"B2 Z", "B2"}}},
        {"incurious_one_boxer",
         "Incurious one-boxer",
         {{"", "B2"}, {"B1 E", "B1"}, {"B1 F", "B1"}, {"B2 Z", "B1"}}},
        {"incurious_two_boxer",
         "Incurious two-boxer",
         {{"", "B2"}, {"B1 E", "B2"}, {"B1 F", "B2"}, {"B2 Z", "B2"}}},
        {"paradox_lover",
         "Paradox-lover",
         {{"", "B1"}, {"B1 E", "B1"}, {"B1 F", "B2"}, {"B2 Z", "B1"}}},
        {"fatalistic",
         "Fatalistic",
         {{"", "B1"}, {"B1 E", "B2"}, {"B1 F", "B1"}, {"B2 Z", "B1"}}}};
    e.slots = {{"look", {""}, {{"B1", "look"}, {"B2", "not look"}}},
               {"box",
                {"B1 E", "B1 F", "B2 Z"},
                {{"B1", "1-box"}, {"B2", "2-box"}}}};
    e.table_policies = {"curious_one_boxer",   "curious_two_boxer",
                        "incurious_one_boxer", "incurious_two_boxer",
                        "paradox_lover",       "fatalistic"};
    catalog.push_back(std::move(e));
  }
  {
    LibraryEntry e;
    e.name = "newcomb_precommit";
    e.summary =
        "Newcomb where the agent may first buy a contract that penalizes "
        "two-boxing, which updates the prediction to one-boxing.";
    e.parameters = {{"eps", Rational(1, 100), "0 < eps < 1"}};
    e.policies = {
        {"signing_one_boxer",
         "Signing one-boxer",
         {{"", "B1"}, {"B1 C", "B1"}, {"B2 Z", "B1"}}},
        {"signing_two_boxer",
         "Signing two-boxer",
         {{"", "B1"}, {"B1 C", "B2"}, {"B2 Z", "B2"}}},
        {"refusing_one_boxer",
         "Refusing one-boxer",
         {{"", "B2"}, {"B1 C", "B1"}, {"B2 Z", "B1"}}},
        {"refusing_two_boxer",
         "Refusing two-boxer",
         {{"", "B2"}, {"B1 C", "B2"}, {"B2 Z", "B2"}}}};
    e.slots = {{"commit", {""}, {{"B1", "commit"}, {"B2", "not commit"}}},
               {"box", {"B1 C", "B2 Z"}, {{"B1", "1-box"}, {"B2", "2-box"}}}};
    e.table_policies = {"signing_one_boxer", "signing_two_boxer",
                        "refusing_one_boxer", "refusing_two_boxer"};
    catalog.push_back(std::move(e));
  }
  {
    LibraryEntry e;
    e.name = "seq_toxoplasmosis";
    e.summary =
        "Toxoplasmosis with a prior doctor visit: paying the doctor removes "
        "the parasite; otherwise a kitten may appear and petting is again "
        "evidence of infection.";
    e.policies = {
        {"pi1",
         "No doctor, never pet",
         {{"", "N"}, {"N K", "N"}, {"N S", "N"}, {"Y C", "N"}}},
        {"pi2",
         "Doctor",
         {{"", "Y"}, {"N K", "N"}, {"N S", "N"}, {"Y C", "N"}}}};
    e.slots = {{"doc", {""}, {{"Y", "doc"}, {"N", "no doc"}}},
               {"pet", {"N K"}, {{"Y", "pet"}, {"N", "not pet"}}}};
    e.table_policies = {"pi1", "pi2"};
    catalog.push_back(std::move(e));
  }
  return catalog;
}

}  // namespace

const std::vector<LibraryEntry>& Catalog() {
  static const std::vector<LibraryEntry>* catalog =
      new std::vector<LibraryEntry>(MakeCatalog());
  return *catalog;
}

const LibraryEntry& FindEntry(const std::string& name) {
  for (const LibraryEntry& entry : Catalog()) {
    if (entry.name == name) return entry;
  }
  throw UnknownEnvironment("unknown environment '" + name +
                           "'; see `dtlab list`");
}

EnvironmentModel Build(const std::string& name, const ParamMap& params) {
  const LibraryEntry& entry = FindEntry(name);
  CheckKnownParams(entry, params);
  if (entry.name == "newcomb") return BuildNewcomb(entry, params);
  if (entry.name == "toxoplasmosis") return BuildToxoplasmosis(entry, params);
  if (entry.name == "newcomb_looking")
    return BuildNewcombLooking(entry, params);
  if (entry.name == "newcomb_precommit")
    return BuildNewcombPrecommit(entry, params);
  if (entry.name == "seq_toxoplasmosis")
    return BuildSeqToxoplasmosis(entry, params);
  throw UnknownEnvironment("unknown environment '" + name + "'");
}

Policy BuildNamedPolicy(const EnvironmentModel& env, const LibraryEntry& entry,
                        const std::string& policy_name) {
  for (const NamedPolicy& np : entry.policies) {
    if (np.name == policy_name) {
      return PolicyFromAssignments(env, DecisionPointSet::Compute(env),
                                   np.assignments, /*require_total=*/true);
    }
  }
  throw DtlabError("environment '" + entry.name + "' has no policy named '" +
                   policy_name + "'");
}

std::string DecisionString(const EnvironmentModel& env,
                           const LibraryEntry& entry,
                           const std::vector<Policy>& solution) {
  if (solution.empty()) return "(none)";
  std::vector<std::string> parts;
  for (const DecisionSlot& slot : entry.slots) {
    std::set<std::string> labels;
    // First restrict to the slot histories each policy actually reaches.
    for (const Policy& policy : solution) {
      std::vector<int> on_policy = policy.OnPolicyPoints(env);
      for (const std::string& text : slot.histories) {
        History h = env.HistoryFromString(text);
        int point = policy.points().PointOf(h);
        if (point < 0) continue;
        if (std::find(on_policy.begin(), on_policy.end(), point) ==
            on_policy.end()) {
          continue;
        }
        labels.insert(
            slot.action_labels.at(env.actions[policy.ActionAtPoint(point)]));
      }
    }
    if (labels.empty()) {
      // The slot is off every policy's own path; report the (hypothetical)
      // prescriptions instead.
      for (const Policy& policy : solution) {
        for (const std::string& text : slot.histories) {
          History h = env.HistoryFromString(text);
          int point = policy.points().PointOf(h);
          if (point < 0) continue;
          labels.insert(
              slot.action_labels.at(env.actions[policy.ActionAtPoint(point)]));
        }
      }
    }
    if (labels.empty()) continue;
    parts.push_back(labels.size() == 1 ? *labels.begin() : "indifferent");
  }
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += ", ";
    out += parts[i];
  }
  return out;
}

std::string PolicyDisplayName(const EnvironmentModel& env,
                              const LibraryEntry& entry,
                              const Policy& policy) {
  auto signature = policy.BehavioralSignature(env);
  for (const NamedPolicy& np : entry.policies) {
    Policy named = PolicyFromAssignments(env, policy.points_ptr(),
                                         np.assignments, /*require_total=*/true);
    if (named.BehavioralSignature(env) == signature) return np.display_name;
  }
  std::ostringstream os;
  bool first = true;
  for (const auto& [point, action] : signature) {
    if (!first) os << "; ";
    os << "'" << env.HistoryToString(policy.points().representative(point))
       << "' -> " << env.actions[action];
    first = false;
  }
  return os.str();
}

const ValueTableGolden& LookingTableGolden() {
  static const ValueTableGolden* golden = new ValueTableGolden{
      {"Curious one-boxer", "Curious two-boxer", "Incurious one-boxer",
       "Incurious two-boxer", "Paradox-lover", "Fatalistic"},
      {{"500000", "990000", "500000"},
       {"501000", "11000", "501000"},
       {"990000", "990000", "500000"},
       {"11000", "11000", "501000"},
       {"500500", "500500", "500500"},
       {"500500", "500500", "500500"}}};
  return *golden;
}

const ValueTableGolden& PrecommitTableGolden() {
  static const ValueTableGolden* golden = new ValueTableGolden{
      {"Signing one-boxer", "Signing two-boxer", "Refusing one-boxer",
       "Refusing two-boxer"},
      {{"700000", "700000", "700000"},
       {"699000", "699000", "699000"},
       {"990000", "990000", "500000"},
       {"11000", "11000", "501000"}}};
  return *golden;
}

const ValueTableGolden& SeqToxoTableGolden() {
  static const ValueTableGolden* golden = new ValueTableGolden{
      {"No doctor, never pet", "Doctor"},
      {{"-30/7", "-110/31", "-5"}, {"-4", "-4", "-4"}}};
  return *golden;
}

const DecisionTableGolden& SummaryTableGolden() {
  static const DecisionTableGolden* golden = new DecisionTableGolden{
      {"newcomb", "newcomb_precommit", "newcomb_looking", "toxoplasmosis",
       "seq_toxoplasmosis"},
      {"Newcomb", "Newcomb with precommitment", "Newcomb with looking",
       "Toxoplasmosis", "Sequential toxoplasmosis"},
      {{"1-box", "1-box", "2-box"},
       {"not commit, 1-box", "not commit, 1-box", "commit, 1-box"},
       {"not look, 1-box", "not look, 1-box", "indifferent, 2-box"},
       {"not pet", "not pet", "pet"},
       {"doc, not pet", "no doc, not pet", "doc, pet"}}};
  return *golden;
}

}  // namespace dtlab
