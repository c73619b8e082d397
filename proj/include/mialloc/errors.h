// Copyright 2026 The mialloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MIALLOC_ERRORS_H_
#define MIALLOC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace mialloc {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of a function (v < 0, theta < 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// InverseEval was asked for a value above g(delta).
class InfeasibleTargetError : public Error {
 public:
  using Error::Error;
};

// An instance or function violates a structural invariant.
class InvalidInstanceError : public Error {
 public:
  using Error::Error;
};

// An iterative solver stopped before certifying its tolerance. The best
// value found so far is kept so callers can report it.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double best_value, double gap)
      : Error(what), best_value_(best_value), gap_(gap) {}

  double best_value() const { return best_value_; }
  double gap() const { return gap_; }

 private:
  double best_value_;
  double gap_;
};

// The brute-force grid oracle would enumerate more points than allowed.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

}  // namespace mialloc

#endif  // MIALLOC_ERRORS_H_
