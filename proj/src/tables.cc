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

#include "dtlab/tables.h"

#include "dtlab/errors.h"
#include "dtlab/solver.h"
#include "dtlab/values.h"

namespace dtlab {

namespace {

constexpr std::array<Theory, 3> kTheories = {Theory::kActionEvidential,
                                             Theory::kPolicyEvidential,
                                             Theory::kCausal};

}  // namespace

ValueTable ReproduceValueTable(const std::string& env_name) {
  const LibraryEntry& entry = FindEntry(env_name);
  if (entry.table_policies.empty()) {
    throw DtlabError("environment '" + env_name +
                     "' has no example value table");
  }
  EnvironmentModel env = Build(env_name);

  ValueTable table;
  table.environment = env_name;
  for (const std::string& policy_name : entry.table_policies) {
    Policy policy = BuildNamedPolicy(env, entry, policy_name);
    std::array<Rational, 3> row;
    for (size_t i = 0; i < kTheories.size(); ++i) {
      row[i] = Value(kTheories[i], env, policy, History());
    }
    for (const NamedPolicy& np : entry.policies) {
      if (np.name == policy_name) table.row_names.push_back(np.display_name);
    }
    table.values.push_back(row);
  }
  for (size_t i = 0; i < kTheories.size(); ++i) {
    SolveResult solved = Solve(kTheories[i], env);
    table.decisions[i] = DecisionString(env, entry, solved.policies);
  }
  return table;
}

SummaryTable ReproduceSummaryTable() {
  const DecisionTableGolden& layout = SummaryTableGolden();
  SummaryTable table;
  table.row_labels = layout.row_labels;
  for (const std::string& env_name : layout.environments) {
    const LibraryEntry& entry = FindEntry(env_name);
    EnvironmentModel env = Build(env_name);
    std::array<std::string, 3> row;
    for (size_t i = 0; i < kTheories.size(); ++i) {
      SolveResult solved = Solve(kTheories[i], env);
      row[i] = DecisionString(env, entry, solved.policies);
    }
    table.decisions.push_back(row);
  }
  return table;
}

namespace {

const char* kTheoryColumns[3] = {"aev", "pev", "cau"};

}  // namespace

std::vector<CellDiff> CheckValueTable(const ValueTable& table,
                                      const ValueTableGolden& golden) {
  std::vector<CellDiff> diffs;
  if (table.row_names != golden.rows) {
    diffs.push_back({"(rows)", "", "", "row set or order differs"});
    return diffs;
  }
  for (size_t r = 0; r < golden.rows.size(); ++r) {
    for (size_t c = 0; c < 3; ++c) {
      std::string actual = table.values[r][c].ToString();
      if (actual != golden.values[r][c]) {
        diffs.push_back({golden.rows[r], kTheoryColumns[c],
                         golden.values[r][c], actual});
      }
    }
  }
  return diffs;
}

std::vector<CellDiff> CheckSummaryTable(const SummaryTable& table,
                                        const DecisionTableGolden& golden) {
  const char* columns[3] = {"saedt", "spedt", "scdt"};
  std::vector<CellDiff> diffs;
  for (size_t r = 0; r < golden.row_labels.size(); ++r) {
    for (size_t c = 0; c < 3; ++c) {
      if (table.decisions[r][c] != golden.decisions[r][c]) {
        diffs.push_back({golden.row_labels[r], columns[c],
                         golden.decisions[r][c], table.decisions[r][c]});
      }
    }
  }
  return diffs;
}

std::string SelectorEnvironment(const std::string& selector) {
  if (selector == "table1") return "";
  if (selector == "ex_looking") return "newcomb_looking";
  if (selector == "ex_precommit") return "newcomb_precommit";
  if (selector == "ex_seqtoxo") return "seq_toxoplasmosis";
  throw DtlabError("unknown table selector '" + selector +
                   "'; expected table1, ex_looking, ex_precommit or "
                   "ex_seqtoxo");
}

}  // namespace dtlab
