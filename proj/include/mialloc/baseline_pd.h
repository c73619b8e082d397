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

#ifndef MIALLOC_BASELINE_PD_H_
#define MIALLOC_BASELINE_PD_H_

#include <vector>

#include "mialloc/instance.h"
#include "mialloc/report.h"
#include "mialloc/revenue.h"
#include "mialloc/tolerances.h"

namespace mialloc {

// Principal branch of the Lambert W function for x >= 0, by Halley
// iteration seeded at ln(1 + x). Throws DomainError for x < 0.
double LambertW(double x);

struct ChiValues {
  double chi = 1.0;        // W(lnθ e^{lnθ - 1}) - lnθ + 1, in (0, 1]
  double chi_tilde = 0.0;  // 1 / (1 - e^{-χ})
};

// Throws DomainError for θ < 1.
ChiValues Chi(double theta);

// Threshold (marginal pseudo-cost) of one inventory:
//   φ(w) = p_min (e^{w/C} - 1) / (e^χ - 1)      on [0, χC]
//   φ(w) = p_min θ^{(w/C - χ) / (1 - χ)}         on [χC, C]
// so that φ(0) = 0, φ(χC) = p_min and φ(C) = p_max. At θ = 1 the first
// branch covers [0, C].
class Threshold {
 public:
  Threshold(double p_min, double p_max, double capacity);

  // Throws DomainError outside [0, C].
  double operator()(double w) const;
  // Exponential-branch value at w, extended beyond χC.
  double Lower(double w) const;
  // Power-branch value at w, extended below χC. Zero when θ = 1.
  double Upper(double w) const;

  double chi() const { return chi_.chi; }
  double chi_tilde() const { return chi_.chi_tilde; }
  double capacity() const { return capacity_; }
  double split() const { return chi_.chi * capacity_; }

 private:
  double p_min_;
  double p_max_;
  double capacity_;
  ChiValues chi_;
};

// One slot of the threshold algorithm. `used` holds w_{i,t-1} on entry and
// w_{i,t} on exit. Returns v̄_{i,t}.
std::vector<double> PdStep(const std::vector<Threshold>& thresholds,
                           std::vector<double>& used,
                           const std::vector<RevenueFunction>& slot,
                           double allowance, const Tolerances& tol = {});

// Full-horizon run on a gradient-bounded instance; the bound is χ̃(θ).
RunReport RunPrimalDual(const Instance& instance, const Tolerances& tol = {});

}  // namespace mialloc

#endif  // MIALLOC_BASELINE_PD_H_
