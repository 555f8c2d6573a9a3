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

#ifndef DTLAB_FORMAT_H_
#define DTLAB_FORMAT_H_

#include <string>
#include <vector>

#include <json.hpp>

#include "dtlab/environment.h"
#include "dtlab/rational.h"

namespace dtlab {

// RFC-4180 field quoting: fields containing commas, quotes or newlines are
// wrapped in double quotes with inner quotes doubled.
std::string CsvField(const std::string& field);
std::string CsvRow(const std::vector<std::string>& fields);

// Exact rational as {"n": "...", "d": "..."}; strings keep arbitrary
// precision intact.
nlohmann::json RationalJson(const Rational& r);

// Either the exact n/d form or a decimal rendering.
std::string RenderValue(const Rational& r, bool exact, int digits = 6);

// The lowered model as JSON: alphabets, lifetime, prior, utilities, explicit
// kernel rows, information sets.
nlohmann::json ModelToJson(const EnvironmentModel& env);

}  // namespace dtlab

#endif  // DTLAB_FORMAT_H_
