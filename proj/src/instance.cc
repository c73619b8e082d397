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

#include "mialloc/instance.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "mialloc/errors.h"

namespace mialloc {

std::string_view ClassName(RevenueClass c) {
  return c == RevenueClass::kGradientBounded ? "gradient_bounded"
                                             : "price_elastic";
}

RevenueClass ParseClass(std::string_view name) {
  if (name == "gradient_bounded") return RevenueClass::kGradientBounded;
  if (name == "price_elastic") return RevenueClass::kPriceElastic;
  throw InvalidInstanceError("unknown revenue class: " + std::string(name));
}

SlotMatrix ZeroMatrix(int num_slots, int num_inventories) {
  return SlotMatrix(num_slots, std::vector<double>(num_inventories, 0.0));
}

Instance::Instance(std::vector<double> capacity, std::vector<double> allowance,
                   std::vector<std::vector<RevenueFunction>> revenue,
                   double p_min, double p_max, RevenueClass revenue_class)
    : capacity_(std::move(capacity)),
      allowance_(std::move(allowance)),
      revenue_(std::move(revenue)),
      p_min_(p_min),
      p_max_(p_max),
      revenue_class_(revenue_class) {
  if (capacity_.empty()) throw InvalidInstanceError("N must be positive");
  if (allowance_.empty()) throw InvalidInstanceError("T must be positive");
  if (!(p_min_ > 0.0) || !(p_max_ >= p_min_) || !std::isfinite(p_max_)) {
    throw InvalidInstanceError("need 0 < p_min <= p_max");
  }
  if (revenue_.size() != allowance_.size()) {
    throw InvalidInstanceError("revenue rows must match the horizon");
  }
  for (double c : capacity_) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw InvalidInstanceError("capacities must be finite and >= 0");
    }
  }
  for (size_t t = 0; t < allowance_.size(); ++t) {
    const double a = allowance_[t];
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw InvalidInstanceError("allowances must be finite and >= 0");
    }
    if (revenue_[t].size() != capacity_.size()) {
      throw InvalidInstanceError("each slot needs one function per inventory");
    }
    for (size_t i = 0; i < capacity_.size(); ++i) {
      const RevenueFunction& g = revenue_[t][i];
      if (g.delta() > a * (1.0 + 1e-12) + 1e-12) {
        std::ostringstream msg;
        msg << "rate limit exceeds allowance at t=" << t << " i=" << i;
        throw InvalidInstanceError(msg.str());
      }
      const std::string err =
          CheckClassMembership(g, revenue_class_, p_min_, p_max_);
      if (!err.empty()) {
        std::ostringstream msg;
        msg << "slot " << t << " inventory " << i << ": " << err;
        throw InvalidInstanceError(msg.str());
      }
    }
  }
}

std::vector<RevenueFunction> Instance::InventoryHistory(int i, int upto) const {
  std::vector<RevenueFunction> out;
  out.reserve(upto);
  for (int t = 0; t < upto; ++t) out.push_back(revenue_[t][i]);
  return out;
}

Instance Instance::Prefix(int upto) const {
  upto = std::clamp(upto, 1, num_slots());
  return Instance(capacity_,
                  std::vector<double>(allowance_.begin(),
                                      allowance_.begin() + upto),
                  std::vector<std::vector<RevenueFunction>>(
                      revenue_.begin(), revenue_.begin() + upto),
                  p_min_, p_max_, revenue_class_);
}

bool Instance::operator==(const Instance& other) const {
  return capacity_ == other.capacity_ && allowance_ == other.allowance_ &&
         revenue_ == other.revenue_ && p_min_ == other.p_min_ &&
         p_max_ == other.p_max_ && revenue_class_ == other.revenue_class_;
}

std::string CheckConcavity(const RevenueFunction& g, int samples, double tol) {
  const double delta = g.delta();
  if (delta <= 0.0) return {};
  if (g.Eval(0.0) != 0.0) return "g(0) != 0";
  double prev_value = 0.0;
  double prev_slope = std::numeric_limits<double>::infinity();
  const double h = delta / samples;
  for (int k = 1; k <= samples; ++k) {
    const double value = g.Eval(k * h);
    const double slope = (value - prev_value) / h;
    if (slope < -tol) return "g decreases on [0, delta]";
    if (slope > prev_slope + tol) return "g is not concave";
    prev_value = value;
    prev_slope = slope;
  }
  return {};
}

std::string CheckGradientBounds(const RevenueFunction& g, double p_min,
                                double p_max, int samples, double tol) {
  const double delta = g.delta();
  for (int k = 0; k <= samples; ++k) {
    const double v = samples == 0 ? 0.0 : delta * k / samples;
    const Supergradient s = g.SupergradientAt(v);
    if (s.left < p_min - tol || s.right < p_min - tol ||
        s.left > p_max + tol || s.right > p_max + tol) {
      std::ostringstream msg;
      msg << "gradient outside [" << p_min << ", " << p_max << "] at v=" << v;
      return msg.str();
    }
  }
  return {};
}

std::string CheckClassMembership(const RevenueFunction& g, RevenueClass c,
                                 double p_min, double p_max) {
  const double tol = 1e-12 * p_max;
  if (c == RevenueClass::kGradientBounded) {
    // Gradients are monotone, so the two ends decide membership.
    if (g.MaxSlope() > p_max + tol) return "g'(0) above p_max";
    if (g.MinSlope() < p_min - tol) return "g'(delta) below p_min";
    return {};
  }
  switch (g.kind()) {
    case RevenueKind::kLinear:
    case RevenueKind::kPriceElastic:
      break;
    default:
      return "price-elastic instances need linear or price_elastic functions";
  }
  const double price = g.MaxSlope();
  if (price < p_min - tol || price > p_max + tol) {
    return "price outside [p_min, p_max]";
  }
  if (g.MinSlope() < -tol) return "g decreasing before delta";
  return {};
}

FeasibilityReport CheckFeasibility(const Instance& instance,
                                   const SlotMatrix& v, double tol) {
  FeasibilityReport r;
  const int T = instance.num_slots();
  const int N = instance.num_inventories();
  std::vector<double> used(N, 0.0);
  for (int t = 0; t < static_cast<int>(v.size()) && t < T; ++t) {
    double slot_total = 0.0;
    for (int i = 0; i < N; ++i) {
      const double x = v[t][i];
      r.min_value = std::min(r.min_value, x);
      r.max_rate_violation = std::max(
          r.max_rate_violation, x - instance.revenue(t, i).delta());
      slot_total += x;
      used[i] += x;
    }
    r.max_allowance_violation =
        std::max(r.max_allowance_violation, slot_total - instance.allowance(t));
  }
  for (int i = 0; i < N; ++i) {
    r.max_capacity_violation =
        std::max(r.max_capacity_violation, used[i] - instance.capacity(i));
  }
  r.capacity_ok = r.max_capacity_violation <= tol;
  r.allowance_ok = r.max_allowance_violation <= tol;
  r.rate_ok = r.max_rate_violation <= tol && r.min_value >= -tol;
  return r;
}

double Objective(const Instance& instance, const SlotMatrix& v) {
  double total = 0.0;
  for (int t = 0; t < static_cast<int>(v.size()); ++t) {
    for (int i = 0; i < instance.num_inventories(); ++i) {
      total += instance.revenue(t, i).Eval(v[t][i]);
    }
  }
  return total;
}

}  // namespace mialloc
