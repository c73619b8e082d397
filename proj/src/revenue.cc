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

#include "mialloc/revenue.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "mialloc/errors.h"

namespace mialloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative slack accepted above delta before Eval reports a domain error.
constexpr double kDomainSlack = 1e-9;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void Require(bool condition, const char* message) {
  if (!condition) throw InvalidInstanceError(message);
}

bool IsFiniteNonNegative(double x) { return std::isfinite(x) && x >= 0.0; }

// Revenue-maximizing quantity of (price - coef v^k) v.
double PriceElasticArgmax(const PriceElasticParams& p) {
  if (p.coef <= 0.0) return kInf;
  return std::pow(p.price / ((p.exponent + 1.0) * p.coef), 1.0 / p.exponent);
}

double SegmentStart(const PiecewiseLinearParams& p, size_t j) {
  return j == 0 ? 0.0 : p.breakpoints[j - 1];
}

double SegmentEnd(const PiecewiseLinearParams& p, size_t j) {
  return j < p.breakpoints.size() ? p.breakpoints[j] : kInf;
}

}  // namespace

std::string_view KindName(RevenueKind kind) {
  switch (kind) {
    case RevenueKind::kLinear:
      return "linear";
    case RevenueKind::kPiecewiseLinear:
      return "piecewise_linear";
    case RevenueKind::kExpSaturation:
      return "exp_saturation";
    case RevenueKind::kPriceElastic:
      return "price_elastic";
  }
  return "unknown";
}

RevenueKind ParseKind(std::string_view name) {
  if (name == "linear") return RevenueKind::kLinear;
  if (name == "piecewise_linear") return RevenueKind::kPiecewiseLinear;
  if (name == "exp_saturation") return RevenueKind::kExpSaturation;
  if (name == "price_elastic") return RevenueKind::kPriceElastic;
  throw InvalidInstanceError("unknown revenue kind: " + std::string(name));
}

RevenueFunction::RevenueFunction(Params params, double delta)
    : params_(std::move(params)), delta_(delta) {}

RevenueFunction RevenueFunction::Linear(double slope, double delta) {
  Require(IsFiniteNonNegative(slope), "linear slope must be >= 0");
  Require(IsFiniteNonNegative(delta), "rate limit must be >= 0");
  return RevenueFunction(LinearParams{slope}, delta);
}

RevenueFunction RevenueFunction::PiecewiseLinear(
    std::vector<double> slopes, std::vector<double> breakpoints,
    double delta) {
  Require(!slopes.empty(), "piecewise-linear needs at least one slope");
  Require(breakpoints.size() + 1 == slopes.size(),
          "piecewise-linear needs one breakpoint fewer than slopes");
  Require(IsFiniteNonNegative(delta), "rate limit must be >= 0");
  for (size_t j = 0; j < slopes.size(); ++j) {
    Require(IsFiniteNonNegative(slopes[j]), "slopes must be >= 0");
    if (j > 0) Require(slopes[j] <= slopes[j - 1], "slopes must not increase");
  }
  for (size_t j = 0; j < breakpoints.size(); ++j) {
    Require(std::isfinite(breakpoints[j]) && breakpoints[j] > 0.0,
            "breakpoints must be positive");
    if (j > 0) {
      Require(breakpoints[j] > breakpoints[j - 1],
              "breakpoints must be strictly increasing");
    }
  }
  return RevenueFunction(
      PiecewiseLinearParams{std::move(slopes), std::move(breakpoints)}, delta);
}

RevenueFunction RevenueFunction::ExpSaturation(double floor, double peak,
                                               double scale, double delta) {
  Require(IsFiniteNonNegative(floor), "floor slope must be >= 0");
  Require(std::isfinite(peak) && peak >= floor, "peak slope must be >= floor");
  Require(std::isfinite(scale) && scale > 0.0, "scale must be > 0");
  Require(IsFiniteNonNegative(delta), "rate limit must be >= 0");
  return RevenueFunction(ExpSaturationParams{floor, peak, scale}, delta);
}

RevenueFunction RevenueFunction::PriceElastic(double price, double coef,
                                              double exponent, double delta) {
  Require(IsFiniteNonNegative(price), "price must be >= 0");
  Require(IsFiniteNonNegative(coef), "elasticity coefficient must be >= 0");
  Require(std::isfinite(exponent) && exponent >= 1.0,
          "elasticity exponent must be >= 1");
  Require(IsFiniteNonNegative(delta), "rate limit must be >= 0");
  PriceElasticParams p{price, coef, exponent};
  const double argmax = PriceElasticArgmax(p);
  RevenueFunction g(p, std::min(delta, argmax));
  g.delta_clipped_ = argmax < delta;
  return g;
}

RevenueKind RevenueFunction::kind() const {
  return static_cast<RevenueKind>(params_.index());
}

double RevenueFunction::Eval(double v) const {
  if (!(v >= -1e-12 * std::max(1.0, delta_)) ||
      v > delta_ * (1.0 + kDomainSlack) + 1e-12) {
    throw DomainError("revenue evaluated outside [0, delta]: v=" +
                      std::to_string(v) + " delta=" + std::to_string(delta_));
  }
  v = std::clamp(v, 0.0, delta_);
  return std::visit(
      Overloaded{
          [v](const LinearParams& p) { return p.slope * v; },
          [v](const PiecewiseLinearParams& p) {
            double total = 0.0;
            for (size_t j = 0; j < p.slopes.size(); ++j) {
              const double start = SegmentStart(p, j);
              if (v <= start) break;
              total += p.slopes[j] * (std::min(v, SegmentEnd(p, j)) - start);
            }
            return total;
          },
          [v](const ExpSaturationParams& p) {
            return p.floor * v +
                   (p.peak - p.floor) * p.scale * -std::expm1(-v / p.scale);
          },
          [v](const PriceElasticParams& p) {
            return (p.price - p.coef * std::pow(v, p.exponent)) * v;
          },
      },
      params_);
}

Supergradient RevenueFunction::SupergradientAt(double v) const {
  if (!(v >= -1e-12 * std::max(1.0, delta_)) ||
      v > delta_ * (1.0 + kDomainSlack) + 1e-12) {
    throw DomainError("derivative requested outside [0, delta]");
  }
  v = std::clamp(v, 0.0, delta_);
  const double delta = delta_;
  return std::visit(
      Overloaded{
          [](const LinearParams& p) { return Supergradient{p.slope, p.slope}; },
          [v, delta](const PiecewiseLinearParams& p) {
            size_t j = 0;
            while (j + 1 < p.slopes.size() && v >= SegmentEnd(p, j)) ++j;
            const double right = p.slopes[j];
            double left = right;
            if (j > 0 && v == SegmentStart(p, j)) left = p.slopes[j - 1];
            if (v == 0.0) left = right;
            if (v >= delta) {
              // Use the slope of the segment that ends at delta.
              size_t k = 0;
              while (k + 1 < p.slopes.size() && delta > SegmentEnd(p, k)) ++k;
              return Supergradient{p.slopes[k], p.slopes[k]};
            }
            return Supergradient{left, right};
          },
          [v](const ExpSaturationParams& p) {
            const double d = p.floor + (p.peak - p.floor) * std::exp(-v / p.scale);
            return Supergradient{d, d};
          },
          [v](const PriceElasticParams& p) {
            const double d = p.price - (p.exponent + 1.0) * p.coef *
                                           std::pow(v, p.exponent);
            return Supergradient{d, d};
          },
      },
      params_);
}

double RevenueFunction::Derivative(double v) const {
  const Supergradient s = SupergradientAt(v);
  return v >= delta_ ? s.left : s.right;
}

double RevenueFunction::SecondDerivative(double v) const {
  v = std::clamp(v, 0.0, delta_);
  return std::visit(
      Overloaded{
          [](const LinearParams&) { return 0.0; },
          [](const PiecewiseLinearParams&) { return 0.0; },
          [v](const ExpSaturationParams& p) {
            return -(p.peak - p.floor) / p.scale * std::exp(-v / p.scale);
          },
          [v](const PriceElasticParams& p) {
            if (p.exponent == 1.0) return -2.0 * p.coef;
            return -(p.exponent + 1.0) * p.exponent * p.coef *
                   std::pow(v, p.exponent - 1.0);
          },
      },
      params_);
}

double RevenueFunction::InverseEval(double y) const {
  const double top = Eval(delta_);
  if (y <= 0.0) return 0.0;
  if (y >= top) {
    if (y > top * (1.0 + 1e-8) + 1e-10) {
      throw InfeasibleTargetError("target " + std::to_string(y) +
                                  " exceeds g(delta)=" + std::to_string(top));
    }
    return delta_;
  }
  double lo = 0.0;
  double hi = delta_;
  for (int iter = 0; iter < 200 && hi - lo > 1e-16 * delta_; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (Eval(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(Eval(lo) - y) <= std::abs(Eval(hi) - y) ? lo : hi;
}

Demand RevenueFunction::DemandAt(double lambda) const {
  const double delta = delta_;
  return std::visit(
      Overloaded{
          [lambda, delta](const LinearParams& p) {
            if (lambda < p.slope) return Demand{delta, delta};
            if (lambda > p.slope) return Demand{0.0, 0.0};
            return Demand{0.0, delta};
          },
          [lambda, delta](const PiecewiseLinearParams& p) {
            Demand d;
            for (size_t j = 0; j < p.slopes.size(); ++j) {
              const double start = SegmentStart(p, j);
              if (start >= delta) break;
              const double len = std::min(SegmentEnd(p, j), delta) - start;
              if (p.slopes[j] > lambda) {
                d.lo += len;
                d.hi += len;
              } else if (p.slopes[j] == lambda) {
                d.hi += len;
              } else {
                break;
              }
            }
            return d;
          },
          [lambda, delta](const ExpSaturationParams& p) {
            const double b = p.peak - p.floor;
            double v;
            if (b <= 0.0) {
              if (lambda < p.floor) return Demand{delta, delta};
              if (lambda > p.floor) return Demand{0.0, 0.0};
              return Demand{0.0, delta};
            }
            if (lambda >= p.peak) {
              v = 0.0;
            } else if (lambda <= p.floor) {
              v = delta;
            } else {
              v = std::min(delta, -p.scale * std::log((lambda - p.floor) / b));
            }
            return Demand{v, v};
          },
          [lambda, delta](const PriceElasticParams& p) {
            if (p.coef <= 0.0) {
              if (lambda < p.price) return Demand{delta, delta};
              if (lambda > p.price) return Demand{0.0, 0.0};
              return Demand{0.0, delta};
            }
            if (lambda >= p.price) return Demand{0.0, 0.0};
            const double v = std::min(
                delta, std::pow((p.price - lambda) / ((p.exponent + 1.0) * p.coef),
                                1.0 / p.exponent));
            return Demand{v, v};
          },
      },
      params_);
}

double RevenueFunction::Conjugate(double lambda) const {
  const double v = DemandAt(lambda).hi;
  return Eval(v) - lambda * v;
}

double RevenueFunction::MaxSlope() const { return SupergradientAt(0.0).right; }

double RevenueFunction::MinSlope() const {
  return SupergradientAt(delta_).left;
}

std::vector<double> RevenueFunction::CriticalSlopes() const {
  const double delta = delta_;
  if (const auto* p = std::get_if<PiecewiseLinearParams>(&params_)) {
    std::vector<double> out;
    for (size_t j = 0; j < p->slopes.size(); ++j) {
      if (SegmentStart(*p, j) >= delta && j > 0) break;
      out.push_back(p->slopes[j]);
    }
    return out;
  }
  if (kind() == RevenueKind::kLinear) return {MaxSlope()};
  return {MaxSlope(), MinSlope()};
}

RevenueFunction RevenueFunction::Scaled(double pi) const {
  if (!(pi >= 1.0) || !std::isfinite(pi)) {
    throw DomainError("scaling factor must be >= 1");
  }
  RevenueFunction out = std::visit(
      Overloaded{
          [this, pi](const LinearParams& p) {
            return RevenueFunction(p, delta_ * pi);
          },
          [this, pi](const PiecewiseLinearParams& p) {
            PiecewiseLinearParams q = p;
            for (double& b : q.breakpoints) b *= pi;
            return RevenueFunction(std::move(q), delta_ * pi);
          },
          [this, pi](const ExpSaturationParams& p) {
            ExpSaturationParams q = p;
            q.scale *= pi;
            return RevenueFunction(q, delta_ * pi);
          },
          [this, pi](const PriceElasticParams& p) {
            PriceElasticParams q = p;
            q.coef /= std::pow(pi, p.exponent);
            return RevenueFunction(q, delta_ * pi);
          },
      },
      params_);
  out.delta_clipped_ = delta_clipped_;
  return out;
}

RevenueFunction RevenueFunction::WithRateLimit(double limit) const {
  if (!IsFiniteNonNegative(limit)) {
    throw DomainError("rate limit must be finite and >= 0");
  }
  if (const auto* p = std::get_if<PriceElasticParams>(&params_)) {
    limit = std::min(limit, PriceElasticArgmax(*p));
  }
  RevenueFunction out(params_, limit);
  out.delta_clipped_ = delta_clipped_;
  return out;
}

bool RevenueFunction::operator==(const RevenueFunction& other) const {
  if (delta_ != other.delta_ ||
      params_.index() != other.params_.index()) {
    return false;
  }
  return std::visit(
      Overloaded{
          [&other](const LinearParams& p) {
            return p.slope == std::get<LinearParams>(other.params_).slope;
          },
          [&other](const PiecewiseLinearParams& p) {
            const auto& q = std::get<PiecewiseLinearParams>(other.params_);
            return p.slopes == q.slopes && p.breakpoints == q.breakpoints;
          },
          [&other](const ExpSaturationParams& p) {
            const auto& q = std::get<ExpSaturationParams>(other.params_);
            return p.floor == q.floor && p.peak == q.peak && p.scale == q.scale;
          },
          [&other](const PriceElasticParams& p) {
            const auto& q = std::get<PriceElasticParams>(other.params_);
            return p.price == q.price && p.coef == q.coef &&
                   p.exponent == q.exponent;
          },
      },
      params_);
}

}  // namespace mialloc
