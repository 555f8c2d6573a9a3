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
//
// The `.env` format: a line-oriented model description.
//
//   dtenv 1
//   # comment
//   states: E F
//   actions: B1 B2
//   percepts: O_0 O_T O_M O_MT
//   lifetime: 1
//   param: eps = 1/100
//   prior: E = 1/2
//   act: F | -> B1 = 1 - $eps        # history pattern between | and ->
//   per: F | B1 -> O_M = 1           # pattern, then the action
//   utility: O_0 = 0
//   infoset: {B1 E, B1 F}
//
// Patterns are space-separated symbols, `*` matching any single symbol (the
// action slot of a `per` row may be `*` too). The most specific matching row
// wins: more non-wildcard symbols beat fewer, and two distinct rows of equal
// specificity matching the same cell are an error. Probability positions
// accept +, -, *, / and parentheses over rational literals and $params;
// decimal literals are converted exactly. Unmentioned percept cells are 0.

#ifndef DTLAB_DSL_H_
#define DTLAB_DSL_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dtlab/environment.h"
#include "dtlab/library.h"
#include "dtlab/rational.h"

namespace dtlab {
namespace dsl {

struct ParseDiagnostic {
  enum class Severity { kError, kWarning };
  Severity severity = Severity::kError;
  int line = 0;
  int column = 0;
  std::string message;
  std::string token;

  std::string ToString() const;
};

// A probability expression; evaluated against the parameter map at lowering.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct PriorLine { std::string state; ExprPtr value; int line; };
struct ActLine {
  std::string state;
  std::vector<std::string> pattern;  // alternating action/percept symbols
  std::string action;
  ExprPtr value;
  int line;
};
struct PerLine {
  std::string state;
  std::vector<std::string> pattern;
  std::string action;  // may be "*"
  std::string percept;
  ExprPtr value;
  int line;
};
struct UtilityLine { std::string percept; ExprPtr value; int line; };
struct InfosetLine {
  std::vector<std::vector<std::string>> histories;
  int line;
};
struct ParamDecl { std::string name; Rational value; int line; };

struct EnvSpecDocument {
  std::vector<std::string> states, actions, percepts;
  int lifetime = 0;
  std::vector<ParamDecl> params;
  std::vector<PriorLine> priors;
  std::vector<ActLine> act_rows;
  std::vector<PerLine> per_rows;
  std::vector<UtilityLine> utilities;
  std::vector<InfosetLine> infoset_lines;
};

struct ParseResult {
  std::optional<EnvSpecDocument> document;  // absent on any syntax error
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return document.has_value(); }
};

ParseResult Parse(const std::string& text);

struct LowerResult {
  std::optional<EnvironmentModel> model;  // absent on any semantic error
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return model.has_value(); }
};

// Expands patterns into explicit kernel rows over the reachable histories,
// substitutes parameters, and validates the result. Parameter overrides
// replace the document's defaults.
LowerResult Lower(const EnvSpecDocument& doc, const ParamMap& overrides = {});

// Parse-then-lower convenience; throws SemanticError with the rendered
// diagnostics when anything fails.
EnvironmentModel LoadOrThrow(const std::string& text,
                             const ParamMap& overrides = {});

// Canonical serialization: explicit rows, lowest-terms rationals, stable
// ordering. Lowering the parsed output reproduces the model's joint exactly.
std::string Serialize(const EnvironmentModel& env);

}  // namespace dsl
}  // namespace dtlab

#endif  // DTLAB_DSL_H_
