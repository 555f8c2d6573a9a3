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

#ifndef DTLAB_LIBRARY_H_
#define DTLAB_LIBRARY_H_

#include <array>
#include <map>
#include <string>
#include <vector>

#include "dtlab/environment.h"
#include "dtlab/policy.h"
#include "dtlab/rational.h"

namespace dtlab {

using ParamMap = std::map<std::string, Rational>;

struct ParameterDoc {
  std::string name;
  Rational default_value;
  std::string domain;  // human-readable, e.g. "0 < eps < 1"
};

// A named total policy for a library environment, given as decision-table
// assignments over observable histories.
struct NamedPolicy {
  std::string name;          // CLI identifier, e.g. "incurious_one_boxer"
  std::string display_name;  // table row label, e.g. "Incurious one-boxer"
  std::vector<std::pair<std::string, std::string>> assignments;
};

// A position in the rendered decision string ("doc, not pet"): a group of
// decision histories plus display labels for the actions taken there.
struct DecisionSlot {
  std::string name;
  std::vector<std::string> histories;
  std::map<std::string, std::string> action_labels;  // action name -> label
};

struct LibraryEntry {
  std::string name;
  std::string summary;
  std::vector<ParameterDoc> parameters;
  std::vector<NamedPolicy> policies;
  std::vector<DecisionSlot> slots;
  // Policies forming the rows of this environment's example value table;
  // empty when the environment has no such table.
  std::vector<std::string> table_policies;
};

// The five built-in environments, stable-ordered.
const std::vector<LibraryEntry>& Catalog();

// Throws UnknownEnvironment.
const LibraryEntry& FindEntry(const std::string& name);

// Builds the environment with parameter overrides applied over the entry's
// defaults. Throws UnknownEnvironment or ParameterOutOfDomain.
EnvironmentModel Build(const std::string& name, const ParamMap& params = {});

// Instantiates a named policy as a total policy over the environment's
// decision points.
Policy BuildNamedPolicy(const EnvironmentModel& env, const LibraryEntry& entry,
                        const std::string& policy_name);

// Renders a solution set as the environment's decision string, e.g.
// "not look, 1-box". Positions where the solution policies genuinely differ
// render as "indifferent".
std::string DecisionString(const EnvironmentModel& env,
                           const LibraryEntry& entry,
                           const std::vector<Policy>& solution);

// Display name of the behavioral class of `policy`, falling back to a raw
// decision-table rendering for unnamed behavior.
std::string PolicyDisplayName(const EnvironmentModel& env,
                              const LibraryEntry& entry, const Policy& policy);

// Embedded expected tables, exact values as strings.
struct ValueTableGolden {
  std::vector<std::string> rows;                    // display names
  std::vector<std::array<std::string, 3>> values;   // aev, pev, cau
};
const ValueTableGolden& LookingTableGolden();
const ValueTableGolden& PrecommitTableGolden();
const ValueTableGolden& SeqToxoTableGolden();

struct DecisionTableGolden {
  std::vector<std::string> environments;            // library names, row order
  std::vector<std::string> row_labels;              // display labels
  std::vector<std::array<std::string, 3>> decisions;  // saedt, spedt, scdt
};
const DecisionTableGolden& SummaryTableGolden();

}  // namespace dtlab

#endif  // DTLAB_LIBRARY_H_
