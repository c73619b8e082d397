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

#include "mialloc/baseline_pd.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "mialloc/errors.h"
#include "mialloc/instance_io.h"
#include "mialloc/offline.h"

namespace mialloc {
namespace {

// Bisection widths on v and β.
constexpr double kBisectTol = 1e-10;

}  // namespace

double LambertW(double x) {
  if (!(x >= 0.0)) throw DomainError("Lambert W needs x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;
  double w = std::log1p(x);
  for (int iter = 0; iter < 100; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double step =
        f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() *
                              (1.0 + std::abs(w))) {
      break;
    }
  }
  return w;
}

ChiValues Chi(double theta) {
  if (!(theta >= 1.0)) throw DomainError("theta must be >= 1");
  const double l = std::log(theta);
  ChiValues out;
  out.chi = l == 0.0 ? 1.0 : LambertW(l * std::exp(l - 1.0)) - l + 1.0;
  out.chi_tilde = -1.0 / std::expm1(-out.chi);
  return out;
}

Threshold::Threshold(double p_min, double p_max, double capacity)
    : p_min_(p_min), p_max_(p_max), capacity_(capacity) {
  if (!(p_min > 0.0) || !(p_max >= p_min)) {
    throw DomainError("need 0 < p_min <= p_max");
  }
  if (!(capacity > 0.0)) throw DomainError("capacity must be positive");
  chi_ = Chi(p_max / p_min);
}

double Threshold::Lower(double w) const {
  return p_min_ * std::expm1(w / capacity_) / std::expm1(chi_.chi);
}

double Threshold::Upper(double w) const {
  if (chi_.chi >= 1.0) return 0.0;
  const double e = (w / capacity_ - chi_.chi) / (1.0 - chi_.chi);
  return p_min_ * std::pow(p_max_ / p_min_, e);
}

double Threshold::operator()(double w) const {
  if (w < 0.0 || w > capacity_ * (1.0 + 1e-12)) {
    throw DomainError("threshold argument outside [0, C]");
  }
  if (chi_.chi >= 1.0 || w <= split()) return Lower(w);
  return Upper(w);
}

std::vector<double> PdStep(const std::vector<Threshold>& thresholds,
                           std::vector<double>& used,
                           const std::vector<RevenueFunction>& slot,
                           double allowance, const Tolerances& /*tol*/) {
  const size_t n = slot.size();
  if (thresholds.size() != n || used.size() != n) {
    throw DomainError("one threshold and usage entry per inventory");
  }
  std::vector<double> room(n);
  for (size_t i = 0; i < n; ++i) {
    room[i] = std::clamp(std::min(slot[i].delta(),
                                  thresholds[i].capacity() - used[i]),
                         0.0, slot[i].delta());
  }
  // Largest v in [0, room] with g'(v-) >= φ(w + v) + β.
  auto demand = [&](size_t i, double beta) {
    const RevenueFunction& g = slot[i];
    const Threshold& phi = thresholds[i];
    auto ok = [&](double v) {
      return g.SupergradientAt(v).left >=
             phi(std::min(used[i] + v, phi.capacity())) + beta;
    };
    if (room[i] <= 0.0 || !ok(0.0)) return 0.0;
    if (ok(room[i])) return room[i];
    double lo = 0.0;
    double hi = room[i];
    while (hi - lo > kBisectTol * std::max(1.0, room[i])) {
      const double mid = 0.5 * (lo + hi);
      if (ok(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  };

  std::vector<double> v_lo(n), v_hi(n);
  double total_lo = 0.0;
  double beta_hi = 0.0;
  for (size_t i = 0; i < n; ++i) {
    v_lo[i] = demand(i, 0.0);
    total_lo += v_lo[i];
    beta_hi = std::max(beta_hi, slot[i].MaxSlope());
  }
  std::vector<double> v = v_lo;
  if (total_lo > allowance) {
    double beta_lo = 0.0;
    double total_hi = 0.0;
    std::vector<double> trial(n);
    while (beta_hi - beta_lo > kBisectTol * std::max(1.0, beta_hi)) {
      const double beta = 0.5 * (beta_lo + beta_hi);
      double total = 0.0;
      for (size_t i = 0; i < n; ++i) {
        trial[i] = demand(i, beta);
        total += trial[i];
      }
      if (total > allowance) {
        beta_lo = beta;
        v_lo = trial;
        total_lo = total;
      } else {
        beta_hi = beta;
        v_hi = trial;
        total_hi = total;
      }
    }
    const double w = total_lo > total_hi
                         ? std::clamp((allowance - total_hi) /
                                          (total_lo - total_hi),
                                      0.0, 1.0)
                         : 0.0;
    for (size_t i = 0; i < n; ++i) v[i] = v_hi[i] + w * (v_lo[i] - v_hi[i]);
  }
  for (size_t i = 0; i < n; ++i) used[i] += v[i];
  return v;
}

RunReport RunPrimalDual(const Instance& instance, const Tolerances& tol) {
  if (instance.revenue_class() != RevenueClass::kGradientBounded) {
    throw DomainError("the threshold baseline needs a gradient-bounded instance");
  }
  const auto start = std::chrono::steady_clock::now();
  const int T = instance.num_slots();
  const int N = instance.num_inventories();
  std::vector<Threshold> thresholds;
  for (int i = 0; i < N; ++i) {
    // A zero-capacity inventory never allocates; any positive C works for
    // its threshold.
    thresholds.emplace_back(instance.p_min(), instance.p_max(),
                            std::max(instance.capacity(i), 1e-300));
  }
  std::vector<double> used(N, 0.0);

  RunReport report;
  report.instance_id = InstanceId(instance);
  report.algorithm = "primal_dual";
  report.pi = 0.0;
  report.allocation.v = ZeroMatrix(T, N);
  report.allocation.a = ZeroMatrix(T, N);
  for (int t = 0; t < T; ++t) {
    if (instance.allowance(t) <= 0.0) continue;
    std::vector<double> before = used;
    for (int i = 0; i < N; ++i) {
      if (instance.capacity(i) <= 0.0) used[i] = thresholds[i].capacity();
    }
    const std::vector<double> v =
        PdStep(thresholds, used, instance.slot(t), instance.allowance(t), tol);
    for (int i = 0; i < N; ++i) {
      report.allocation.v[t][i] = v[i];
      used[i] = before[i] + v[i];
    }
  }

  report.online = Objective(instance, report.allocation.v);
  report.allocation.objective = report.online;
  MultiOptions mo;
  mo.tol = tol;
  const OfflineSolution opt = SolveMulti(instance, T, mo);
  report.offline = opt.objective;
  report.gap = opt.gap;
  report.bound = Chi(instance.theta()).chi_tilde;

  const FeasibilityReport feas =
      CheckFeasibility(instance, report.allocation.v, tol.feas);
  report.AddCheck("capacity", feas.max_capacity_violation, tol.feas);
  report.AddCheck("allowance", feas.max_allowance_violation, tol.feas);
  report.AddCheck("rate", feas.max_rate_violation, tol.feas);
  report.AddCheck("nonnegative", -feas.min_value, tol.feas);
  double fill = 0.0;
  for (int i = 0; i < N; ++i) {
    if (instance.capacity(i) > 0.0) {
      fill = std::max(fill, used[i] / instance.capacity(i));
    }
  }
  report.metrics["max_capacity_fill"] = fill;
  report.metrics["chi"] = Chi(instance.theta()).chi;

  FinalizeRatio(report, N * T * kBisectTol * instance.p_max(), tol);
  if (std::isfinite(report.ratio)) {
    report.metrics["tightness"] = report.ratio / report.bound;
  }
  report.elapsed_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return report;
}

}  // namespace mialloc
