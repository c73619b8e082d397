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

#ifndef MIALLOC_CR_PURSUIT_H_
#define MIALLOC_CR_PURSUIT_H_

#include <vector>

#include "mialloc/instance.h"
#include "mialloc/report.h"
#include "mialloc/revenue.h"
#include "mialloc/tolerances.h"

namespace mialloc {

// lnθ + 1. Throws DomainError for θ < 1.
double PiOne(double theta);

// Single-inventory pursuit: each slot earns 1/π of the increase of the
// offline optimum over the revenue functions seen so far.
class PursuitState {
 public:
  struct Entry {
    double v = 0.0;          // decision v̂_t
    double increment = 0.0;  // OPT(t) - OPT(t-1)
    double target = 0.0;     // increment / π
    double breach = 0.0;     // target - g_t(δ_t) when positive, else 0
  };

  PursuitState(double pi, double capacity, const Tolerances& tol = {});

  // Adds `history_fn` to the offline history, recomputes the optimum and
  // returns the decision v̂ solving own_fn(v̂) = increment / π.
  double Advance(const RevenueFunction& history_fn,
                 const RevenueFunction& own_fn);
  // Plain pursuit where history and decision use the same function.
  double Step(const RevenueFunction& g) { return Advance(g, g); }

  double pi() const { return pi_; }
  double capacity() const { return capacity_; }
  // Offline optimum over the history so far.
  double opt() const { return opt_; }
  // Sum of own_fn(v̂) over slots.
  double online_value() const { return online_value_; }
  double total_allocation() const { return total_allocation_; }
  // Largest duality gap reported by the offline solves.
  double max_solver_gap() const { return max_solver_gap_; }
  double max_breach() const { return max_breach_; }
  const std::vector<Entry>& history() const { return entries_; }
  const std::vector<RevenueFunction>& functions() const { return functions_; }

 private:
  double pi_;
  double capacity_;
  Tolerances tol_;
  double opt_ = 0.0;
  double online_value_ = 0.0;
  double total_allocation_ = 0.0;
  double max_solver_gap_ = 0.0;
  double max_breach_ = 0.0;
  std::vector<RevenueFunction> functions_;
  std::vector<Entry> entries_;
};

// Runs the pursuit with parameter π over an instance with N = 1.
RunReport RunCrPursuit(const Instance& instance, double pi,
                       const Tolerances& tol = {});

}  // namespace mialloc

#endif  // MIALLOC_CR_PURSUIT_H_
