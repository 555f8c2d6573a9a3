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

#include "dtlab/format.h"

#include <sstream>

namespace dtlab {

std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += "\"";
  return quoted;
}

std::string CsvRow(const std::vector<std::string>& fields) {
  std::string row;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) row += ",";
    row += CsvField(fields[i]);
  }
  row += "\r\n";
  return row;
}

nlohmann::json RationalJson(const Rational& r) {
  std::ostringstream n, d;
  n << r.numerator();
  d << r.denominator();
  return nlohmann::json{{"n", n.str()}, {"d", d.str()}};
}

std::string RenderValue(const Rational& r, bool exact, int digits) {
  return exact ? r.ToString() : r.ToDecimalString(digits);
}

nlohmann::json ModelToJson(const EnvironmentModel& env) {
  nlohmann::json j;
  j["states"] = env.states;
  j["actions"] = env.actions;
  j["percepts"] = env.percepts;
  j["lifetime"] = env.lifetime;
  j["prior"] = nlohmann::json::array();
  for (const Rational& p : env.prior) j["prior"].push_back(RationalJson(p));
  j["utility"] = nlohmann::json::array();
  for (const Rational& u : env.utility) j["utility"].push_back(RationalJson(u));

  j["action_kernel"] = nlohmann::json::array();
  for (const auto& [key, row] : env.action_kernel) {
    nlohmann::json entry;
    entry["state"] = env.states[key[0]];
    std::string hist;
    for (size_t i = 1; i < key.size(); i += 2) {
      if (i > 1) hist += " ";
      hist += env.actions[key[i]] + " " + env.percepts[key[i + 1]];
    }
    entry["history"] = hist;
    entry["row"] = nlohmann::json::array();
    for (const Rational& p : row) entry["row"].push_back(RationalJson(p));
    j["action_kernel"].push_back(std::move(entry));
  }

  j["percept_kernel"] = nlohmann::json::array();
  for (const auto& [key, row] : env.percept_kernel) {
    nlohmann::json entry;
    entry["state"] = env.states[key[0]];
    std::string hist;
    for (size_t i = 1; i + 1 < key.size(); i += 2) {
      if (i > 1) hist += " ";
      hist += env.actions[key[i]] + " " + env.percepts[key[i + 1]];
    }
    entry["history"] = hist;
    entry["action"] = env.actions[key.back()];
    entry["row"] = nlohmann::json::array();
    for (const Rational& p : row) entry["row"].push_back(RationalJson(p));
    j["percept_kernel"].push_back(std::move(entry));
  }

  j["infosets"] = nlohmann::json::array();
  for (const auto& group : env.infosets) {
    nlohmann::json members = nlohmann::json::array();
    for (const History& h : group) members.push_back(env.HistoryToString(h));
    j["infosets"].push_back(std::move(members));
  }
  return j;
}

}  // namespace dtlab
