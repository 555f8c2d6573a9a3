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

#ifndef DTLAB_TABLES_H_
#define DTLAB_TABLES_H_

#include <array>
#include <string>
#include <vector>

#include "dtlab/library.h"
#include "dtlab/rational.h"

namespace dtlab {

// A policy-by-theory value matrix for one library environment, plus the
// per-theory prescription strings from the solver.
struct ValueTable {
  std::string environment;
  std::vector<std::string> row_names;
  std::vector<std::array<Rational, 3>> values;    // aev, pev, cau per row
  std::array<std::string, 3> decisions;           // per theory
};

// Builds the environment with default parameters, evaluates every
// table-policy row under all three theories, and solves for prescriptions.
ValueTable ReproduceValueTable(const std::string& env_name);

// The 5-scenario by 3-theory decision summary.
struct SummaryTable {
  std::vector<std::string> row_labels;
  std::vector<std::array<std::string, 3>> decisions;
};
SummaryTable ReproduceSummaryTable();

struct CellDiff {
  std::string row;
  std::string column;
  std::string expected;
  std::string actual;
};

std::vector<CellDiff> CheckValueTable(const ValueTable& table,
                                      const ValueTableGolden& golden);
std::vector<CellDiff> CheckSummaryTable(const SummaryTable& table,
                                        const DecisionTableGolden& golden);

// Maps a table selector (table1, ex_looking, ex_precommit, ex_seqtoxo) to
// the library environment it reproduces; empty for table1.
std::string SelectorEnvironment(const std::string& selector);

}  // namespace dtlab

#endif  // DTLAB_TABLES_H_
