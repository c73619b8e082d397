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

#ifndef MIALLOC_ANP_H_
#define MIALLOC_ANP_H_

#include <map>
#include <utility>
#include <vector>

#include "mialloc/instance.h"
#include "mialloc/report.h"
#include "mialloc/revenue.h"
#include "mialloc/tolerances.h"

namespace mialloc {

// v -> π g(v / π) with rate limit π δ.
RevenueFunction ScaledRevenue(const RevenueFunction& g, double pi);

// π (e^{1/π} - 1) / e^{1/π}. Throws DomainError for π < 1.
double Alpha(double pi);
// 2 (lnθ + 1).
double PiTwo(double theta);
// e^{1/π} / (e^{1/π} - 1).
double LargeNRatio(double pi);
// π₁ when π₁ >= N, otherwise LargeNRatio(π₁).
double CompetitiveBound(double theta, int num_inventories);

// Pseudo-cost Ψ(a) of one inventory at one slot. `history` holds the scaled
// revenue functions of earlier slots already limited by their allowance,
// `current` the scaled function of this slot.
class PsiEvaluator {
 public:
  PsiEvaluator(std::vector<RevenueFunction> history, RevenueFunction current,
               double capacity, double pi, const Tolerances& tol = {});

  // Weighting kernel f(x) on [0, C].
  double Weight(double x) const;
  // G(x, a), cached.
  double G(double x, double a);

  // f(C) G(C, a) - 1/(πC) ∫ G(x, a) f(x) dx by composite Simpson, starting
  // at 33 nodes and doubling until two estimates agree within
  // tol.quad_rel (1 + |Ψ|). Throws NonConvergenceError past 16385 nodes.
  double Eval(double a);
  // ∫ f(x) ∂G/∂x dx rewritten as ∫ F(min(C, S_a(λ))) dλ over the capacity
  // price λ, with F(y) = ∫_0^y f and S_a the total demand at λ. Exact up to
  // adaptive Simpson on the smooth stretches of S_a.
  double EvalByParts(double a) const;

  // Node count used by the last Eval call.
  int last_nodes() const { return last_nodes_; }
  const RevenueFunction& current() const { return current_; }
  double capacity() const { return capacity_; }

 private:
  double Simpson(int nodes, double a);

  std::vector<RevenueFunction> history_;
  RevenueFunction current_;
  double capacity_;
  double pi_;
  Tolerances tol_;
  std::map<std::pair<double, double>, double> cache_;
  int last_nodes_ = 0;
};

enum class AatMethod {
  // Bisection on the allowance multiplier with per-inventory bisection on
  // g̃'(a) - Ψ(a) >= μ.
  kWaterFilling,
  // Projected gradient ascent with step 1/L and exact capped-simplex
  // projection. Intended for smooth revenue functions.
  kProjectedGradient,
};

struct AatResult {
  std::vector<double> a;
  double multiplier = 0.0;     // μ for the allowance row
  double kkt_residual = 0.0;
  int iterations = 0;
};

// Euclidean projection of y onto {x : 0 <= x <= caps, Σx <= budget}.
std::vector<double> ProjectCappedSimplex(const std::vector<double>& y,
                                         const std::vector<double>& caps,
                                         double budget);

// Solves max Σ_i g̃_i(a_i) - ∫_0^{a_i} Ψ_i s.t. Σ a_i <= budget,
// 0 <= a_i <= caps_i, with g̃_i = psi[i].current(). Ψ is evaluated by parts.
AatResult SolveAat(std::vector<PsiEvaluator>& psi,
                   const std::vector<double>& caps, double budget,
                   AatMethod method = AatMethod::kWaterFilling,
                   const Tolerances& tol = {}, double kkt_tol = 1e-6,
                   int max_iters = 5000);

enum class AnpMode { kAuto, kSmall, kLarge };

struct AnpOptions {
  // π <= 0 selects π₁ for gradient-bounded instances and π₂ for
  // price-elastic ones.
  double pi = 0.0;
  AnpMode mode = AnpMode::kAuto;
  AatMethod aat_method = AatMethod::kWaterFilling;
  // Check Σ_i OPT̃_{i,t} >= α(π) OPT_t at every prefix (one offline solve per
  // slot).
  bool check_prefix = true;
  Tolerances tol;
};

// Picks A&P_s when N <= π and A&P_l otherwise.
RunReport RunAnp(const Instance& instance, const AnpOptions& options = {});

}  // namespace mialloc

#endif  // MIALLOC_ANP_H_
