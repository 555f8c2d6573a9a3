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

#ifndef DTLAB_ERRORS_H_
#define DTLAB_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dtlab {

// Base class for all domain errors raised by the engine. The CLI maps these
// to exit code 1; anything else escaping is a bug.
class DtlabError : public std::runtime_error {
 public:
  explicit DtlabError(const std::string& message)
      : std::runtime_error(message) {}
};

// Conditioning on an event of measure zero.
class ZeroProbabilityEvent : public DtlabError {
 public:
  explicit ZeroProbabilityEvent(const std::string& message)
      : DtlabError(message) {}
};

// A query at a history with probability zero under the environment model.
class UnreachableHistory : public DtlabError {
 public:
  explicit UnreachableHistory(const std::string& message)
      : DtlabError(message) {}
};

// Policy enumeration would exceed the configured budget.
class BudgetExceeded : public DtlabError {
 public:
  BudgetExceeded(const std::string& message, std::string policy_count)
      : DtlabError(message), policy_count_(std::move(policy_count)) {}
  const std::string& policy_count() const { return policy_count_; }

 private:
  std::string policy_count_;
};

// SDT was asked to decide without an explicit percept-distribution family.
class MissingPerceptFamily : public DtlabError {
 public:
  explicit MissingPerceptFamily(const std::string& message)
      : DtlabError(message) {}
};

class UnknownEnvironment : public DtlabError {
 public:
  explicit UnknownEnvironment(const std::string& message)
      : DtlabError(message) {}
};

class ParameterOutOfDomain : public DtlabError {
 public:
  explicit ParameterOutOfDomain(const std::string& message)
      : DtlabError(message) {}
};

// A structurally well-formed document that does not lower to a valid model.
// Carries the pre-rendered diagnostic block for display.
class SemanticError : public DtlabError {
 public:
  explicit SemanticError(const std::string& message) : DtlabError(message) {}
};

}  // namespace dtlab

#endif  // DTLAB_ERRORS_H_
