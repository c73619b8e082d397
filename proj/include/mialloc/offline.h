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

#ifndef MIALLOC_OFFLINE_H_
#define MIALLOC_OFFLINE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mialloc/instance.h"
#include "mialloc/revenue.h"
#include "mialloc/tolerances.h"

namespace mialloc {

// Optimum of the single-inventory problem
//   max sum_t g_t(v_t)  s.t.  sum_t v_t <= capacity, 0 <= v_t <= delta_t.
struct SingleSolution {
  double objective = 0.0;   // primal value of `v`
  double dual_value = 0.0;  // sum_t h_t(multiplier) + multiplier * capacity
  double gap = 0.0;         // dual_value - objective
  double multiplier = 0.0;  // capacity price lambda >= 0
  std::vector<double> v;
};

// Bisection on the capacity price. Exact up to floating point for every
// revenue family; ties on linear stretches are split in proportion to their
// lengths.
SingleSolution SolveSingle(std::span<const RevenueFunction> revenues,
                           double capacity, const Tolerances& tol = {});

// Optimum of the multi-inventory problem over slots [0, upto).
struct OfflineSolution {
  double objective = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  SlotMatrix v;                              // v[t][i]
  std::vector<double> capacity_multipliers;  // alpha_i
  std::vector<double> allowance_multipliers; // beta_t
  int iterations = 0;
};

enum class MultiMethod {
  // Successive shortest paths on the slot/inventory network with chord
  // refinement for smooth cells. Node potentials certify the gap.
  kFlow,
  // Projected subgradient descent on the dual with s0 / sqrt(k) steps,
  // averaged multipliers for primal recovery and proportional repair.
  kSubgradient,
};

struct MultiOptions {
  MultiMethod method = MultiMethod::kFlow;
  int max_iters = 20000;
  Tolerances tol;
  // Called after each subgradient iteration with (dual value, best primal).
  std::function<void(double, double)> on_iterate;
};

// Throws NonConvergenceError when the certified gap stays above
// tol.Gap(objective).
OfflineSolution SolveMulti(const Instance& instance, int upto,
                           const MultiOptions& options = {});

// Value of the dual program at (alpha, beta) over slots [0, upto). Any
// nonnegative multipliers give an upper bound on the optimum.
double DualValue(const Instance& instance, int upto,
                 std::span<const double> alpha, std::span<const double> beta);

// G(x, a): optimum of a single inventory over `revenues` (one per slot up to
// and including the current one) with capacity x, rate limits
// past_allowance[tau] on earlier slots and a on the current slot.
double SolveG(std::span<const RevenueFunction> revenues,
              std::span<const double> past_allowance, double x, double a,
              const Tolerances& tol = {});

// Exhaustive enumeration of v on {0, step, 2 step, ...} per cell. Returns the
// best feasible objective. Throws BudgetExceededError when the number of grid
// points exceeds `budget`.
double OracleGrid(const Instance& instance, double step,
                  double budget = 1e7);

}  // namespace mialloc

#endif  // MIALLOC_OFFLINE_H_
