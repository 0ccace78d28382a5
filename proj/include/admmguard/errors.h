// Copyright 2026 The AdmmGuard Authors
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

#ifndef ADMMGUARD_ERRORS_H_
#define ADMMGUARD_ERRORS_H_

#include <limits>
#include <stdexcept>
#include <string>

namespace admmguard {

// Inconsistent dimensions, malformed selectors, out-of-range indices.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A linear system that cannot be trusted: singular or too ill-conditioned.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what,
                          double condition_estimate =
                              std::numeric_limits<double>::infinity())
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}

  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

// Invalid user-supplied configuration (CLI flags, config files, specs).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested attack cannot be shaped against this problem/bound geometry.
class AttackInapplicable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The public feasible set is empty, so there is nothing to project onto.
class MitigationImpossible : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace admmguard

#endif  // ADMMGUARD_ERRORS_H_
