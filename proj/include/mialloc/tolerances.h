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

#ifndef MIALLOC_TOLERANCES_H_
#define MIALLOC_TOLERANCES_H_

namespace mialloc {

// Numerical tolerances shared by the solvers and the invariant checks.
struct Tolerances {
  // Absolute tolerance on function values for root finding (InverseEval).
  double root = 1e-10;
  // Absolute tolerance on every feasibility constraint.
  double feas = 1e-8;
  // Offline duality gap must be <= gap_rel * (1 + |OPT|).
  double gap_rel = 1e-6;
  // Simpson refinement stops once successive values differ by
  // < quad_rel * (1 + |value|).
  double quad_rel = 1e-6;
  // KKT stationarity residual of the allowance program, times p_max.
  double kkt_rel = 1e-6;
  // Slack allowed when comparing an empirical ratio against its bound.
  double bound = 1e-9;

  double Gap(double objective) const {
    return gap_rel * (1.0 + (objective < 0 ? -objective : objective));
  }
};

}  // namespace mialloc

#endif  // MIALLOC_TOLERANCES_H_
