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

#include "dtlab/dsl.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "dtlab/errors.h"

namespace dtlab {
namespace dsl {

std::string ParseDiagnostic::ToString() const {
  std::ostringstream os;
  os << (severity == Severity::kError ? "error" : "warning") << " at line "
     << line << ":" << column << ": " << message;
  if (!token.empty()) os << " (near '" << token << "')";
  return os.str();
}

struct Expr {
  enum class Kind { kLiteral, kParam, kAdd, kSub, kMul, kDiv, kNeg };
  Kind kind;
  Rational literal;
  std::string param;
  ExprPtr lhs, rhs;
  int line = 0;
  int column = 0;
};

namespace {

// ---------------------------------------------------------------------------
// Lexing

struct Token {
  enum class Kind { kSymbol, kNumber, kParam, kPunct, kEnd };
  Kind kind;
  std::string text;
  int column;  // 1-based
};

bool IsSymbolChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Tokenizes one logical line (comments already stripped).
std::vector<Token> Lex(const std::string& line, int line_no,
                       std::vector<ParseDiagnostic>* diags) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    int column = static_cast<int>(i) + 1;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      bool has_alpha = false;
      while (j < line.size() && (IsSymbolChar(line[j]) || line[j] == '.')) {
        if (std::isalpha(static_cast<unsigned char>(line[j])) ||
            line[j] == '_') {
          has_alpha = true;
        }
        ++j;
      }
      tokens.push_back({has_alpha ? Token::Kind::kSymbol : Token::Kind::kNumber,
                        line.substr(i, j - i), column});
      i = j;
      continue;
    }
    if (IsSymbolChar(c)) {
      size_t j = i;
      while (j < line.size() && IsSymbolChar(line[j])) ++j;
      tokens.push_back({Token::Kind::kSymbol, line.substr(i, j - i), column});
      i = j;
      continue;
    }
    if (c == '$') {
      size_t j = i + 1;
      while (j < line.size() && IsSymbolChar(line[j])) ++j;
      if (j == i + 1) {
        diags->push_back({ParseDiagnostic::Severity::kError, line_no, column,
                          "expected a parameter name after '$'", "$"});
      }
      tokens.push_back({Token::Kind::kParam, line.substr(i + 1, j - i - 1),
                        column});
      i = j;
      continue;
    }
    if (line.compare(i, 2, "->") == 0) {
      tokens.push_back({Token::Kind::kPunct, "->", column});
      i += 2;
      continue;
    }
    static const std::string kPunct = ":|=+-*/(){},";
    if (kPunct.find(c) != std::string::npos) {
      tokens.push_back({Token::Kind::kPunct, std::string(1, c), column});
      ++i;
      continue;
    }
    diags->push_back({ParseDiagnostic::Severity::kError, line_no, column,
                      "unexpected character", std::string(1, c)});
    ++i;
  }
  tokens.push_back({Token::Kind::kEnd, "", static_cast<int>(line.size()) + 1});
  return tokens;
}

// ---------------------------------------------------------------------------
// Expression parsing (recursive descent over the token list)

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, int line_no,
             std::vector<ParseDiagnostic>* diags)
      : tokens_(std::move(tokens)), line_(line_no), diags_(diags) {}

  const Token& Peek() const { return tokens_[pos_]; }
  bool AtEnd() const { return Peek().kind == Token::Kind::kEnd; }

  Token Next() { return tokens_[AtEnd() ? pos_ : pos_++]; }

  bool ConsumePunct(const std::string& text) {
    if (Peek().kind == Token::Kind::kPunct && Peek().text == text) {
      ++pos_;
      return true;
    }
    return false;
  }

  void Error(const std::string& message) {
    diags_->push_back({ParseDiagnostic::Severity::kError, line_, Peek().column,
                       message, Peek().text});
    failed_ = true;
  }

  bool ExpectPunct(const std::string& text) {
    if (!ConsumePunct(text)) {
      Error("expected '" + text + "'");
      return false;
    }
    return true;
  }

  std::string ExpectSymbol(const char* what) {
    if (Peek().kind != Token::Kind::kSymbol) {
      Error(std::string("expected ") + what);
      return "";
    }
    return Next().text;
  }

  ExprPtr ParseExpr() { return ParseAdditive(); }

  bool failed() const { return failed_; }

 private:
  ExprPtr MakeBinary(Expr::Kind kind, ExprPtr lhs, ExprPtr rhs, int column) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    e->line = line_;
    e->column = column;
    return e;
  }

  ExprPtr ParseAdditive() {
    ExprPtr lhs = ParseMultiplicative();
    while (lhs != nullptr) {
      int column = Peek().column;
      if (ConsumePunct("+")) {
        lhs = MakeBinary(Expr::Kind::kAdd, lhs, ParseMultiplicative(), column);
      } else if (ConsumePunct("-")) {
        lhs = MakeBinary(Expr::Kind::kSub, lhs, ParseMultiplicative(), column);
      } else {
        break;
      }
      if (lhs->rhs == nullptr) return nullptr;
    }
    return lhs;
  }

  ExprPtr ParseMultiplicative() {
    ExprPtr lhs = ParsePrimary();
    while (lhs != nullptr) {
      int column = Peek().column;
      if (ConsumePunct("*")) {
        lhs = MakeBinary(Expr::Kind::kMul, lhs, ParsePrimary(), column);
      } else if (ConsumePunct("/")) {
        lhs = MakeBinary(Expr::Kind::kDiv, lhs, ParsePrimary(), column);
      } else {
        break;
      }
      if (lhs->rhs == nullptr) return nullptr;
    }
    return lhs;
  }

  ExprPtr ParsePrimary() {
    int column = Peek().column;
    if (ConsumePunct("-")) {
      ExprPtr inner = ParsePrimary();
      if (inner == nullptr) return nullptr;
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::kNeg;
      e->lhs = std::move(inner);
      e->line = line_;
      e->column = column;
      return e;
    }
    if (ConsumePunct("(")) {
      ExprPtr inner = ParseExpr();
      if (inner == nullptr) return nullptr;
      if (!ExpectPunct(")")) return nullptr;
      return inner;
    }
    if (Peek().kind == Token::Kind::kNumber) {
      Token tok = Next();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::kLiteral;
      e->line = line_;
      e->column = tok.column;
      try {
        e->literal = Rational::FromString(tok.text);
      } catch (const DtlabError& err) {
        diags_->push_back({ParseDiagnostic::Severity::kError, line_,
                           tok.column, err.what(), tok.text});
        failed_ = true;
        return nullptr;
      }
      return e;
    }
    if (Peek().kind == Token::Kind::kParam) {
      Token tok = Next();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::kParam;
      e->param = tok.text;
      e->line = line_;
      e->column = tok.column;
      return e;
    }
    Error("expected a rational literal, $parameter, or parenthesized "
          "expression");
    return nullptr;
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
  int line_;
  std::vector<ParseDiagnostic>* diags_;
  bool failed_ = false;
};

bool IsValidId(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return IsSymbolChar(c); });
}

}  // namespace

ParseResult Parse(const std::string& text) {
  ParseResult result;
  std::vector<ParseDiagnostic>& diags = result.diagnostics;
  EnvSpecDocument doc;
  bool saw_header = false;
  bool saw_states = false, saw_actions = false, saw_percepts = false;
  bool saw_lifetime = false;
  int line_no = 0;

  std::istringstream stream(text);
  std::string raw;
  while (std::getline(stream, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;

    LineParser p(Lex(raw, line_no, &diags), line_no, &diags);

    if (!saw_header) {
      std::string word = p.ExpectSymbol("the header 'dtenv 1'");
      if (word != "dtenv") {
        diags.push_back({ParseDiagnostic::Severity::kError, line_no, 1,
                         "expected the header 'dtenv 1' before any section",
                         word});
        continue;
      }
      if (p.Peek().kind != Token::Kind::kNumber || p.Next().text != "1") {
        diags.push_back({ParseDiagnostic::Severity::kError, line_no, 1,
                         "unsupported format version; expected 'dtenv 1'",
                         ""});
      }
      saw_header = true;
      continue;
    }

    std::string keyword = p.ExpectSymbol("a section keyword");
    if (!p.ExpectPunct(":")) continue;

    if (keyword == "states" || keyword == "actions" || keyword == "percepts") {
      std::vector<std::string>* target =
          keyword == "states"
              ? &doc.states
              : keyword == "actions" ? &doc.actions : &doc.percepts;
      bool* seen = keyword == "states"
                       ? &saw_states
                       : keyword == "actions" ? &saw_actions : &saw_percepts;
      if (*seen) {
        diags.push_back({ParseDiagnostic::Severity::kError, line_no, 1,
                         "duplicate '" + keyword + "' section", keyword});
        continue;
      }
      *seen = true;
      while (p.Peek().kind == Token::Kind::kSymbol) {
        target->push_back(p.Next().text);
      }
      if (!p.AtEnd() || target->empty()) {
        p.Error("expected a space-separated list of identifiers");
      }
    } else if (keyword == "lifetime") {
      if (saw_lifetime) {
        diags.push_back({ParseDiagnostic::Severity::kError, line_no, 1,
                         "duplicate 'lifetime' section", keyword});
        continue;
      }
      saw_lifetime = true;
      if (p.Peek().kind != Token::Kind::kNumber) {
        p.Error("expected a positive integer lifetime");
        continue;
      }
      Token tok = p.Next();
      try {
        doc.lifetime = std::stoi(tok.text);
      } catch (...) {
        doc.lifetime = 0;
      }
      if (doc.lifetime < 1) {
        diags.push_back({ParseDiagnostic::Severity::kError, line_no,
                         tok.column, "lifetime must be a positive integer",
                         tok.text});
      }
      if (!p.AtEnd()) p.Error("trailing tokens after lifetime");
    } else if (keyword == "param") {
      std::string name = p.ExpectSymbol("a parameter name");
      if (!p.ExpectPunct("=")) continue;
      ExprPtr value = p.ParseExpr();
      if (value == nullptr || !p.AtEnd()) {
        if (value != nullptr) p.Error("trailing tokens after parameter value");
        continue;
      }
      // Parameter defaults must be literal; they seed the substitution map.
      bool plain = value->kind == Expr::Kind::kLiteral;
      bool negated = value->kind == Expr::Kind::kNeg &&
                     value->lhs->kind == Expr::Kind::kLiteral;
      if (!plain && !negated) {
        diags.push_back({ParseDiagnostic::Severity::kError, line_no, 1,
                         "parameter defaults must be rational literals",
                         name});
        continue;
      }
      Rational literal = plain ? value->literal : -value->lhs->literal;
      for (const auto& existing : doc.params) {
        if (existing.name == name) {
          diags.push_back({ParseDiagnostic::Severity::kError, line_no, 1,
                           "duplicate parameter '" + name + "'", name});
        }
      }
      doc.params.push_back({name, literal, line_no});
    } else if (keyword == "prior") {
      std::string state = p.ExpectSymbol("a state identifier");
      if (!p.ExpectPunct("=")) continue;
      ExprPtr value = p.ParseExpr();
      if (value == nullptr) continue;
      if (!p.AtEnd()) { p.Error("trailing tokens after prior value"); continue; }
      doc.priors.push_back({state, value, line_no});
    } else if (keyword == "utility") {
      std::string percept = p.ExpectSymbol("a percept identifier");
      if (!p.ExpectPunct("=")) continue;
      ExprPtr value = p.ParseExpr();
      if (value == nullptr) continue;
      if (!p.AtEnd()) { p.Error("trailing tokens after utility"); continue; }
      doc.utilities.push_back({percept, value, line_no});
    } else if (keyword == "act" || keyword == "per") {
      std::string state = p.ExpectSymbol("a state identifier");
      if (!p.ExpectPunct("|")) continue;
      std::vector<std::string> lhs;
      while (p.Peek().kind == Token::Kind::kSymbol ||
             (p.Peek().kind == Token::Kind::kPunct && p.Peek().text == "*")) {
        lhs.push_back(p.Next().text);
      }
      if (!p.ExpectPunct("->")) continue;
      std::string target = p.ExpectSymbol("a target identifier");
      if (!p.ExpectPunct("=")) continue;
      ExprPtr value = p.ParseExpr();
      if (value == nullptr) continue;
      if (!p.AtEnd()) { p.Error("trailing tokens after probability"); continue; }
      if (keyword == "act") {
        if (lhs.size() % 2 != 0) {
          diags.push_back({ParseDiagnostic::Severity::kError, line_no, 1,
                           "action-row pattern must have an even number of "
                           "symbols (full interactions)",
                           state});
          continue;
        }
        doc.act_rows.push_back({state, lhs, target, value, line_no});
      } else {
        if (lhs.empty() || lhs.size() % 2 != 1) {
          diags.push_back({ParseDiagnostic::Severity::kError, line_no, 1,
                           "percept-row pattern must be a history followed by "
                           "one action",
                           state});
          continue;
        }
        std::string action = lhs.back();
        lhs.pop_back();
        doc.per_rows.push_back({state, lhs, action, target, value, line_no});
      }
    } else if (keyword == "infoset") {
      if (!p.ExpectPunct("{")) continue;
      InfosetLine infoset;
      infoset.line = line_no;
      std::vector<std::string> current;
      bool closed = false;
      while (!p.AtEnd()) {
        if (p.ConsumePunct("}")) {
          closed = true;
          break;
        }
        if (p.ConsumePunct(",")) {
          infoset.histories.push_back(std::move(current));
          current.clear();
          continue;
        }
        if (p.Peek().kind == Token::Kind::kSymbol) {
          current.push_back(p.Next().text);
          continue;
        }
        p.Error("expected a history symbol, ',' or '}'");
        break;
      }
      if (!closed) {
        p.Error("unterminated information set");
        continue;
      }
      infoset.histories.push_back(std::move(current));
      if (!p.AtEnd()) { p.Error("trailing tokens after information set"); continue; }
      doc.infoset_lines.push_back(std::move(infoset));
    } else {
      diags.push_back({ParseDiagnostic::Severity::kError, line_no, 1,
                       "unknown section '" + keyword + "'", keyword});
    }
  }

  if (!saw_header && line_no >= 0) {
    diags.push_back({ParseDiagnostic::Severity::kError, 1, 1,
                     "missing 'dtenv 1' header", ""});
  }
  if (!saw_states) {
    diags.push_back({ParseDiagnostic::Severity::kError, 1, 1,
                     "missing states section", ""});
  }
  if (!saw_actions) {
    diags.push_back({ParseDiagnostic::Severity::kError, 1, 1,
                     "missing actions section", ""});
  }
  if (!saw_percepts) {
    diags.push_back({ParseDiagnostic::Severity::kError, 1, 1,
                     "missing percepts section", ""});
  }
  if (!saw_lifetime) {
    diags.push_back({ParseDiagnostic::Severity::kError, 1, 1,
                     "missing lifetime section", ""});
  }

  for (const auto* list : {&doc.states, &doc.actions, &doc.percepts}) {
    for (const std::string& id : *list) {
      if (!IsValidId(id)) {
        diags.push_back({ParseDiagnostic::Severity::kError, 1, 1,
                         "'" + id + "' is not a valid identifier", id});
      }
    }
  }

  bool has_error = std::any_of(
      diags.begin(), diags.end(), [](const ParseDiagnostic& d) {
        return d.severity == ParseDiagnostic::Severity::kError;
      });
  if (!has_error) result.document = std::move(doc);
  return result;
}

namespace {

// ---------------------------------------------------------------------------
// Lowering

class Lowering {
 public:
  Lowering(const EnvSpecDocument& doc, const ParamMap& overrides,
           std::vector<ParseDiagnostic>* diags)
      : doc_(doc), diags_(diags) {
    for (const ParamDecl& p : doc.params) params_[p.name] = p.value;
    for (const auto& [name, value] : overrides) {
      if (!params_.count(name)) {
        Error(0, "override for undeclared parameter '" + name + "'");
      }
      params_[name] = value;
    }
  }

  std::optional<EnvironmentModel> Run() {
    BuildAlphabets();
    if (failed()) return std::nullopt;
    BuildPriorAndUtility();
    if (failed()) return std::nullopt;
    ExpandKernels();
    if (failed()) return std::nullopt;
    BuildInfosets();
    if (failed()) return std::nullopt;
    ValidationReport report = Validate(env_);
    for (const ValidationIssue& issue : report.issues) {
      Error(0, "model validation: " + issue.message);
    }
    if (failed()) return std::nullopt;
    return std::move(env_);
  }

 private:
  void Error(int line, const std::string& message,
             const std::string& token = "") {
    diags_->push_back(
        {ParseDiagnostic::Severity::kError, line, 1, message, token});
  }

  bool failed() const {
    return std::any_of(diags_->begin(), diags_->end(),
                       [](const ParseDiagnostic& d) {
                         return d.severity ==
                                ParseDiagnostic::Severity::kError;
                       });
  }

  std::optional<Rational> Eval(const ExprPtr& expr) {
    switch (expr->kind) {
      case Expr::Kind::kLiteral:
        return expr->literal;
      case Expr::Kind::kParam: {
        auto it = params_.find(expr->param);
        if (it == params_.end()) {
          Error(expr->line, "undeclared parameter '$" + expr->param + "'",
                expr->param);
          return std::nullopt;
        }
        return it->second;
      }
      case Expr::Kind::kNeg: {
        auto v = Eval(expr->lhs);
        if (!v) return std::nullopt;
        return -*v;
      }
      default: {
        auto lhs = Eval(expr->lhs);
        auto rhs = Eval(expr->rhs);
        if (!lhs || !rhs) return std::nullopt;
        switch (expr->kind) {
          case Expr::Kind::kAdd: return *lhs + *rhs;
          case Expr::Kind::kSub: return *lhs - *rhs;
          case Expr::Kind::kMul: return *lhs * *rhs;
          case Expr::Kind::kDiv:
            if (rhs->is_zero()) {
              Error(expr->line, "division by zero in probability expression");
              return std::nullopt;
            }
            return *lhs / *rhs;
          default: break;
        }
      }
    }
    Error(expr->line, "malformed expression");
    return std::nullopt;
  }

  int LookupId(const std::vector<std::string>& names, const std::string& name,
               int line, const char* kind) {
    for (size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return static_cast<int>(i);
    }
    Error(line, std::string("undeclared ") + kind + " '" + name + "'", name);
    return -1;
  }

  void BuildAlphabets() {
    auto check_unique = [&](const std::vector<std::string>& names,
                            const char* kind) {
      std::set<std::string> seen;
      for (const std::string& n : names) {
        if (!seen.insert(n).second) {
          Error(0, std::string("duplicate ") + kind + " identifier '" + n +
                       "'", n);
        }
      }
    };
    check_unique(doc_.states, "state");
    check_unique(doc_.actions, "action");
    check_unique(doc_.percepts, "percept");
    env_.states = doc_.states;
    env_.actions = doc_.actions;
    env_.percepts = doc_.percepts;
    env_.lifetime = doc_.lifetime;
  }

  void BuildPriorAndUtility() {
    env_.prior.assign(env_.states.size(), Rational(0));
    std::set<int> prior_seen;
    for (const PriorLine& line : doc_.priors) {
      int s = LookupId(env_.states, line.state, line.line, "state");
      if (s < 0) continue;
      if (!prior_seen.insert(s).second) {
        Error(line.line, "duplicate prior for state '" + line.state + "'");
        continue;
      }
      auto v = Eval(line.value);
      if (v) env_.prior[s] = *v;
    }
    Rational sum(0);
    for (const Rational& p : env_.prior) sum += p;
    if (sum != Rational(1) && !doc_.priors.empty()) {
      Error(doc_.priors.front().line,
            "prior sums to " + sum.ToString() + ", expected 1");
    } else if (doc_.priors.empty()) {
      Error(0, "missing prior section");
    }

    env_.utility.assign(env_.percepts.size(), Rational(0));
    std::set<int> utility_seen;
    for (const UtilityLine& line : doc_.utilities) {
      int e = LookupId(env_.percepts, line.percept, line.line, "percept");
      if (e < 0) continue;
      if (!utility_seen.insert(e).second) {
        Error(line.line, "duplicate utility for percept '" + line.percept +
                             "'");
        continue;
      }
      auto v = Eval(line.value);
      if (v) env_.utility[e] = *v;
    }
    for (size_t e = 0; e < env_.percepts.size(); ++e) {
      if (!utility_seen.count(static_cast<int>(e))) {
        Error(0, "missing utility for percept '" + env_.percepts[e] + "'");
      }
    }
  }

  // Pattern matching: same length, '*' matches one symbol.
  static bool PatternMatches(const std::vector<std::string>& pattern,
                             const std::vector<std::string>& symbols) {
    if (pattern.size() != symbols.size()) return false;
    for (size_t i = 0; i < pattern.size(); ++i) {
      if (pattern[i] != "*" && pattern[i] != symbols[i]) return false;
    }
    return true;
  }

  static int Specificity(const ActLine& row) {
    int n = 0;
    for (const auto& s : row.pattern) n += (s != "*");
    return n;
  }
  static int Specificity(const PerLine& row) {
    int n = 0;
    for (const auto& s : row.pattern) n += (s != "*");
    n += (row.action != "*");
    return n;
  }

  std::vector<std::string> HistorySymbols(const History& h) const {
    std::vector<std::string> symbols;
    for (const auto& step : h.steps()) {
      symbols.push_back(env_.actions[step.action]);
      symbols.push_back(env_.percepts[step.percept]);
    }
    return symbols;
  }

  // Resolves one kernel cell from the most specific matching row; 0 when no
  // row matches.
  std::optional<Rational> ResolveActCell(int state, const History& h, int a) {
    std::vector<std::string> symbols = HistorySymbols(h);
    const ActLine* best = nullptr;
    bool ambiguous = false;
    for (const ActLine& row : doc_.act_rows) {
      if (row.state != env_.states[state]) continue;
      if (row.action != env_.actions[a]) continue;
      if (!PatternMatches(row.pattern, symbols)) continue;
      if (best == nullptr || Specificity(row) > Specificity(*best)) {
        best = &row;
        ambiguous = false;
      } else if (Specificity(row) == Specificity(*best)) {
        ambiguous = true;
      }
    }
    if (ambiguous) {
      Error(best->line,
            "ambiguous action rows of equal specificity for (" +
                env_.states[state] + ", '" + env_.HistoryToString(h) +
                "') -> " + env_.actions[a]);
      return std::nullopt;
    }
    if (best == nullptr) return Rational(0);
    auto v = Eval(best->value);
    if (!v) return std::nullopt;
    if (v->is_negative()) {
      Error(best->line, "negative probability");
      return std::nullopt;
    }
    return *v;
  }

  std::optional<Rational> ResolvePerCell(int state,
                                         const History& h_with_action,
                                         int e) {
    std::vector<std::string> symbols =
        HistorySymbols(h_with_action.WithoutPendingAction());
    const std::string action = env_.actions[h_with_action.pending_action()];
    const PerLine* best = nullptr;
    bool ambiguous = false;
    for (const PerLine& row : doc_.per_rows) {
      if (row.state != env_.states[state]) continue;
      if (row.percept != env_.percepts[e]) continue;
      if (row.action != "*" && row.action != action) continue;
      if (!PatternMatches(row.pattern, symbols)) continue;
      if (best == nullptr || Specificity(row) > Specificity(*best)) {
        best = &row;
        ambiguous = false;
      } else if (Specificity(row) == Specificity(*best)) {
        ambiguous = true;
      }
    }
    if (ambiguous) {
      Error(best->line,
            "ambiguous percept rows of equal specificity for (" +
                env_.states[state] + ", '" +
                env_.HistoryToString(h_with_action) + "') -> " +
                env_.percepts[e]);
      return std::nullopt;
    }
    if (best == nullptr) return Rational(0);
    auto v = Eval(best->value);
    if (!v) return std::nullopt;
    if (v->is_negative()) {
      Error(best->line, "negative probability");
      return std::nullopt;
    }
    return *v;
  }

  int FirstLineFor(int state, const History& h, bool act_rows) const {
    // Best-effort source location for a whole-row diagnostic: the first row
    // mentioning this state.
    const std::string& name = env_.states[state];
    if (act_rows) {
      for (const ActLine& row : doc_.act_rows) {
        if (row.state == name) return row.line;
      }
    } else {
      for (const PerLine& row : doc_.per_rows) {
        if (row.state == name) return row.line;
      }
    }
    return 0;
  }

  void ExpandKernels() {
    struct Frame { int state; History history; };
    std::vector<Frame> stack;
    for (int s = 0; s < static_cast<int>(env_.states.size()); ++s) {
      if (!env_.prior[s].is_zero()) stack.push_back({s, History()});
    }
    int guard = 0;
    while (!stack.empty()) {
      if (++guard > 1000000) {
        Error(0, "kernel expansion exceeds the size guard");
        return;
      }
      Frame frame = stack.back();
      stack.pop_back();
      if (frame.history.length() >= env_.lifetime) continue;
      const int s = frame.state;

      std::vector<Rational> arow(env_.actions.size(), Rational(0));
      Rational asum(0);
      bool row_ok = true;
      for (int a = 0; a < static_cast<int>(env_.actions.size()); ++a) {
        auto cell = ResolveActCell(s, frame.history, a);
        if (!cell) { row_ok = false; continue; }
        arow[a] = *cell;
        asum += *cell;
        if (cell->is_zero()) {
          Error(FirstLineFor(s, frame.history, true),
                "action-positivity violation: action " + env_.actions[a] +
                    " has probability 0 at (" + env_.states[s] + ", '" +
                    env_.HistoryToString(frame.history) + "')");
          row_ok = false;
        }
      }
      if (row_ok && asum != Rational(1)) {
        Error(FirstLineFor(s, frame.history, true),
              "action kernel row at (" + env_.states[s] + ", '" +
                  env_.HistoryToString(frame.history) + "') sums to " +
                  asum.ToString() + ", expected 1");
        row_ok = false;
      }
      if (!row_ok) continue;
      std::vector<int> akey = {s};
      for (int v : frame.history.Key()) akey.push_back(v);
      env_.action_kernel[akey] = arow;

      for (int a = 0; a < static_cast<int>(env_.actions.size()); ++a) {
        History ha = frame.history.WithAction(a);
        std::vector<Rational> prow(env_.percepts.size(), Rational(0));
        Rational psum(0);
        bool prow_ok = true;
        for (int e = 0; e < static_cast<int>(env_.percepts.size()); ++e) {
          auto cell = ResolvePerCell(s, ha, e);
          if (!cell) { prow_ok = false; continue; }
          prow[e] = *cell;
          psum += *cell;
        }
        if (prow_ok && psum != Rational(1)) {
          Error(FirstLineFor(s, frame.history, false),
                "percept kernel row at (" + env_.states[s] + ", '" +
                    env_.HistoryToString(ha) + "') sums to " +
                    psum.ToString() + ", expected 1");
          prow_ok = false;
        }
        if (!prow_ok) continue;
        std::vector<int> pkey = akey;
        pkey.push_back(a);
        env_.percept_kernel[pkey] = prow;
        for (int e = 0; e < static_cast<int>(env_.percepts.size()); ++e) {
          if (!prow[e].is_zero()) stack.push_back({s, ha.WithPercept(e)});
        }
      }
    }
  }

  void BuildInfosets() {
    for (const InfosetLine& line : doc_.infoset_lines) {
      std::vector<History> group;
      for (const auto& symbols : line.histories) {
        if (symbols.size() % 2 != 0) {
          Error(line.line,
                "information-set history must alternate action/percept "
                "symbols");
          continue;
        }
        History h;
        bool ok = true;
        for (size_t i = 0; i + 1 < symbols.size(); i += 2) {
          int a = LookupId(env_.actions, symbols[i], line.line, "action");
          int e = LookupId(env_.percepts, symbols[i + 1], line.line,
                           "percept");
          if (a < 0 || e < 0) { ok = false; break; }
          h = h.WithStep(a, e);
        }
        if (ok) group.push_back(h);
      }
      if (group.size() < 2) {
        Error(line.line, "information set needs at least two histories");
        continue;
      }
      for (const History& h : group) {
        if (HistoryProbability(env_, h).is_zero()) {
          Error(line.line, "information set member '" +
                               env_.HistoryToString(h) +
                               "' is unreachable");
        }
        if (h.length() != group.front().length()) {
          Error(line.line,
                "information set mixes histories of different lengths");
        }
      }
      env_.infosets.push_back(std::move(group));
    }
  }

  const EnvSpecDocument& doc_;
  std::vector<ParseDiagnostic>* diags_;
  std::map<std::string, Rational> params_;
  EnvironmentModel env_;
};

}  // namespace

LowerResult Lower(const EnvSpecDocument& doc, const ParamMap& overrides) {
  LowerResult result;
  Lowering lowering(doc, overrides, &result.diagnostics);
  result.model = lowering.Run();
  return result;
}

EnvironmentModel LoadOrThrow(const std::string& text,
                             const ParamMap& overrides) {
  ParseResult parsed = Parse(text);
  if (!parsed.ok()) {
    std::string message = "environment file does not parse:";
    for (const auto& d : parsed.diagnostics) message += "\n  " + d.ToString();
    throw SemanticError(message);
  }
  LowerResult lowered = Lower(*parsed.document, overrides);
  if (!lowered.ok()) {
    std::string message = "environment file does not lower:";
    for (const auto& d : lowered.diagnostics) message += "\n  " + d.ToString();
    throw SemanticError(message);
  }
  return std::move(*lowered.model);
}

std::string Serialize(const EnvironmentModel& env) {
  for (const auto* list : {&env.states, &env.actions, &env.percepts}) {
    for (const std::string& id : *list) {
      if (!IsValidId(id)) {
        throw DtlabError("alphabet symbol '" + id +
                         "' is not serializable as an identifier");
      }
    }
  }
  std::ostringstream os;
  os << "dtenv 1\n";
  auto emit_list = [&os](const char* kind,
                         const std::vector<std::string>& names) {
    os << kind << ":";
    for (const std::string& n : names) os << " " << n;
    os << "\n";
  };
  emit_list("states", env.states);
  emit_list("actions", env.actions);
  emit_list("percepts", env.percepts);
  os << "lifetime: " << env.lifetime << "\n";
  for (size_t s = 0; s < env.states.size(); ++s) {
    os << "prior: " << env.states[s] << " = " << env.prior[s] << "\n";
  }
  for (const auto& [key, row] : env.action_kernel) {
    const int s = key[0];
    std::ostringstream hist;
    for (size_t i = 1; i < key.size(); i += 2) {
      if (i > 1) hist << " ";
      hist << env.actions[key[i]] << " " << env.percepts[key[i + 1]];
    }
    for (size_t a = 0; a < env.actions.size(); ++a) {
      os << "act: " << env.states[s] << " | " << hist.str() << " -> "
         << env.actions[a] << " = " << row[a] << "\n";
    }
  }
  for (const auto& [key, row] : env.percept_kernel) {
    const int s = key[0];
    std::ostringstream hist;
    for (size_t i = 1; i + 1 < key.size(); i += 2) {
      if (i > 1) hist << " ";
      hist << env.actions[key[i]] << " " << env.percepts[key[i + 1]];
    }
    const int action = key.back();
    for (size_t e = 0; e < env.percepts.size(); ++e) {
      if (row[e].is_zero()) continue;  // zero cells are implied
      os << "per: " << env.states[s] << " | " << hist.str()
         << (hist.str().empty() ? "" : " ") << env.actions[action] << " -> "
         << env.percepts[e] << " = " << row[e] << "\n";
    }
  }
  for (size_t e = 0; e < env.percepts.size(); ++e) {
    os << "utility: " << env.percepts[e] << " = " << env.utility[e] << "\n";
  }
  for (const auto& group : env.infosets) {
    os << "infoset: {";
    for (size_t i = 0; i < group.size(); ++i) {
      if (i > 0) os << ", ";
      os << env.HistoryToString(group[i]);
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace dsl
}  // namespace dtlab
