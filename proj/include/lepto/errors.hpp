// Copyright 2026 The lepto authors
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

#ifndef LEPTO_ERRORS_HPP
#define LEPTO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lepto {

// Parameter outside its admissible region (beta above the density bound,
// gamma outside the dependence bounds, malformed model spec).
class FeasibilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numeric routine failed to reach its tolerance (quadrature did not
// converge, bracket expansion ran away, CDF table out of range).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: unreadable price file, bad config, empty panel.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A statistic is undefined on the given sample (e.g. a tail statistic
// requested when the sample has no exceedances).
class UndefinedStatisticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lepto

#endif  // LEPTO_ERRORS_HPP
