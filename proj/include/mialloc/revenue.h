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

#ifndef MIALLOC_REVENUE_H_
#define MIALLOC_REVENUE_H_

#include <string_view>
#include <variant>
#include <vector>

namespace mialloc {

// g(v) = slope * v.
struct LinearParams {
  double slope = 0.0;
};

// Continuous concave piecewise-linear function through the origin.
// slopes[j] applies on [breakpoints[j-1], breakpoints[j]] with an implicit
// breakpoint at 0; the last slope extends to the rate limit.
struct PiecewiseLinearParams {
  std::vector<double> slopes;
  std::vector<double> breakpoints;
};

// g(v) = floor * v + (peak - floor) * scale * (1 - exp(-v / scale)).
// Marginal revenue decays from `peak` at v = 0 towards `floor`.
struct ExpSaturationParams {
  double floor = 0.0;
  double peak = 0.0;
  double scale = 1.0;
};

// g(v) = (price - coef * v^exponent) * v, exponent >= 1.
struct PriceElasticParams {
  double price = 0.0;
  double coef = 0.0;
  double exponent = 1.0;
};

enum class RevenueKind { kLinear, kPiecewiseLinear, kExpSaturation, kPriceElastic };

std::string_view KindName(RevenueKind kind);
RevenueKind ParseKind(std::string_view name);

// Argmax set [lo, hi] of g(v) - lambda * v over [0, delta]. The set is an
// interval because g is concave; lo < hi only when lambda equals the slope of
// a linear stretch of g.
struct Demand {
  double lo = 0.0;
  double hi = 0.0;
};

// Left and right derivatives. At v = 0 both are the right derivative and at
// v = delta both are the left derivative.
struct Supergradient {
  double left = 0.0;
  double right = 0.0;
};

// A single-slot concave, nondecreasing revenue function on [0, delta] with
// g(0) = 0. Immutable; every operation is exact for the closed-form family it
// belongs to except InverseEval, which bisects.
class RevenueFunction {
 public:
  using Params = std::variant<LinearParams, PiecewiseLinearParams,
                              ExpSaturationParams, PriceElasticParams>;

  static RevenueFunction Linear(double slope, double delta);
  static RevenueFunction PiecewiseLinear(std::vector<double> slopes,
                                         std::vector<double> breakpoints,
                                         double delta);
  static RevenueFunction ExpSaturation(double floor, double peak, double scale,
                                       double delta);
  // Clips delta to the revenue-maximizing quantity when needed; see
  // delta_clipped().
  static RevenueFunction PriceElastic(double price, double coef,
                                      double exponent, double delta);

  RevenueKind kind() const;
  const Params& params() const { return params_; }
  double delta() const { return delta_; }
  // True when the PriceElastic constructor lowered delta to the argmax.
  bool delta_clipped() const { return delta_clipped_; }

  // g(v). Throws DomainError outside [0, delta * (1 + 1e-9)].
  double Eval(double v) const;
  // Right derivative, except at delta where the left derivative is returned.
  double Derivative(double v) const;
  Supergradient SupergradientAt(double v) const;
  double SecondDerivative(double v) const;
  // Unique v in [0, delta] with |g(v) - y| <= tol_root, by bisection.
  // Throws InfeasibleTargetError when y exceeds g(delta) beyond tolerance;
  // targets within tolerance above g(delta) return delta.
  double InverseEval(double y) const;

  Demand DemandAt(double lambda) const;
  // h(lambda) = max_{0 <= v <= delta} g(v) - lambda * v.
  double Conjugate(double lambda) const;

  // g'(0) and g'(delta).
  double MaxSlope() const;
  double MinSlope() const;
  // Multipliers at which DemandAt is not smooth, in no particular order.
  std::vector<double> CriticalSlopes() const;

  // v -> pi * g(v / pi) on [0, pi * delta]; stays in the same family.
  RevenueFunction Scaled(double pi) const;
  // Same function with a new rate limit. For PriceElastic the limit is capped
  // at the revenue-maximizing quantity.
  RevenueFunction WithRateLimit(double limit) const;

  bool operator==(const RevenueFunction& other) const;

 private:
  RevenueFunction(Params params, double delta);

  Params params_;
  double delta_ = 0.0;
  bool delta_clipped_ = false;
};

}  // namespace mialloc

#endif  // MIALLOC_REVENUE_H_
