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

#include "mialloc/anp.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "mialloc/cr_pursuit.h"
#include "mialloc/errors.h"
#include "mialloc/instance_io.h"
#include "mialloc/offline.h"

namespace mialloc {
namespace {

constexpr int kFirstNodes = 33;
constexpr int kMaxNodes = 16385;

double AdaptiveSimpson(const std::function<double(double)>& q, double l,
                       double r, double fl, double fm, double fr,
                       double whole, double eps, int depth) {
  const double m = 0.5 * (l + r);
  const double lm = 0.5 * (l + m);
  const double rm = 0.5 * (m + r);
  const double flm = q(lm);
  const double frm = q(rm);
  const double left = (m - l) / 6.0 * (fl + 4.0 * flm + fm);
  const double right = (r - m) / 6.0 * (fm + 4.0 * frm + fr);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * eps) {
    return left + right + diff / 15.0;
  }
  return AdaptiveSimpson(q, l, m, fl, flm, fm, left, 0.5 * eps, depth - 1) +
         AdaptiveSimpson(q, m, r, fm, frm, fr, right, 0.5 * eps, depth - 1);
}

}  // namespace

RevenueFunction ScaledRevenue(const RevenueFunction& g, double pi) {
  return g.Scaled(pi);
}

double Alpha(double pi) {
  if (!(pi >= 1.0)) throw DomainError("alpha needs pi >= 1");
  // π (1 - e^{-1/π}) keeps full precision for large π.
  return -pi * std::expm1(-1.0 / pi);
}

double PiTwo(double theta) { return 2.0 * PiOne(theta); }

double LargeNRatio(double pi) {
  if (!(pi > 0.0)) throw DomainError("pi must be positive");
  return -1.0 / std::expm1(-1.0 / pi);
}

double CompetitiveBound(double theta, int num_inventories) {
  const double pi1 = PiOne(theta);
  return pi1 >= num_inventories ? pi1 : LargeNRatio(pi1);
}

PsiEvaluator::PsiEvaluator(std::vector<RevenueFunction> history,
                           RevenueFunction current, double capacity, double pi,
                           const Tolerances& tol)
    : history_(std::move(history)),
      current_(std::move(current)),
      capacity_(capacity),
      pi_(pi),
      tol_(tol) {
  if (!(pi >= 1.0)) throw DomainError("pi must be >= 1");
  if (!(capacity >= 0.0)) throw DomainError("capacity must be >= 0");
}

double PsiEvaluator::Weight(double x) const {
  const double pc = pi_ * capacity_;
  return std::exp(x / pc) / (pc * std::expm1(1.0 / pi_));
}

double PsiEvaluator::G(double x, double a) {
  const auto key = std::make_pair(x, a);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  std::vector<RevenueFunction> fns = history_;
  fns.push_back(current_.WithRateLimit(std::min(a, current_.delta())));
  const double value = SolveSingle(fns, x, tol_).objective;
  cache_.emplace(key, value);
  return value;
}

double PsiEvaluator::Simpson(int nodes, double a) {
  const double h = capacity_ / (nodes - 1);
  double sum = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double x = capacity_ * k / (nodes - 1);
    const double w = (k == 0 || k == nodes - 1) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    sum += w * G(x, a) * Weight(x);
  }
  return sum * h / 3.0;
}

double PsiEvaluator::Eval(double a) {
  if (a < 0.0) throw DomainError("Psi needs a >= 0");
  if (capacity_ <= 0.0) return 0.0;
  const double head = Weight(capacity_) * G(capacity_, a);
  const double scale = 1.0 / (pi_ * capacity_);
  double prev = head - scale * Simpson(kFirstNodes, a);
  for (int nodes = 2 * kFirstNodes - 1; nodes <= kMaxNodes;
       nodes = 2 * nodes - 1) {
    const double cur = head - scale * Simpson(nodes, a);
    if (std::abs(cur - prev) < tol_.quad_rel * (1.0 + std::abs(cur))) {
      last_nodes_ = nodes;
      return cur;
    }
    prev = cur;
  }
  throw NonConvergenceError("Psi quadrature did not settle", prev,
                            std::numeric_limits<double>::quiet_NaN());
}

double PsiEvaluator::EvalByParts(double a) const {
  if (a < 0.0) throw DomainError("Psi needs a >= 0");
  if (capacity_ <= 0.0) return 0.0;
  std::vector<RevenueFunction> fns = history_;
  fns.push_back(current_.WithRateLimit(std::min(a, current_.delta())));

  double top = 0.0;
  std::vector<double> knots = {0.0};
  for (const RevenueFunction& g : fns) {
    if (g.delta() <= 0.0) continue;
    top = std::max(top, g.MaxSlope());
    for (double s : g.CriticalSlopes()) knots.push_back(s);
  }
  if (top <= 0.0) return 0.0;
  knots.push_back(top);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  const double denom = std::expm1(1.0 / pi_);
  const double pc = pi_ * capacity_;
  // side < 0 takes the demand just above lambda, side > 0 just below.
  auto level = [&](double lambda, int side) {
    double s = 0.0;
    for (const RevenueFunction& g : fns) {
      const Demand d = g.DemandAt(lambda);
      s += side < 0 ? d.lo : d.hi;
    }
    return std::expm1(std::min(s, capacity_) / pc) / denom;
  };
  auto inner = [&](double lambda) { return level(lambda, 1); };

  const double eps = 1e-3 * tol_.quad_rel * (1.0 + top);
  double total = 0.0;
  for (size_t k = 0; k + 1 < knots.size(); ++k) {
    const double l = knots[k];
    const double r = std::min(knots[k + 1], top);
    if (l < 0.0 || r <= l) continue;
    const double fl = level(l, -1);
    const double fr = level(r, 1);
    const double fm = inner(0.5 * (l + r));
    const double whole = (r - l) / 6.0 * (fl + 4.0 * fm + fr);
    total += AdaptiveSimpson(inner, l, r, fl, fm, fr, whole, eps, 40);
  }
  return total;
}

std::vector<double> ProjectCappedSimplex(const std::vector<double>& y,
                                         const std::vector<double>& caps,
                                         double budget) {
  const size_t n = y.size();
  if (caps.size() != n) throw DomainError("caps and y differ in size");
  std::vector<double> x(n);
  auto fill = [&](double shift) {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      x[i] = std::clamp(y[i] - shift, 0.0, std::max(0.0, caps[i]));
      total += x[i];
    }
    return total;
  };
  if (fill(0.0) <= budget) return x;
  double lo = 0.0;
  double hi = 0.0;
  for (double v : y) hi = std::max(hi, v);
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * (1.0 + hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (fill(mid) > budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  fill(hi);
  return x;
}

namespace {

class AatProblem {
 public:
  AatProblem(std::vector<PsiEvaluator>& psi, const std::vector<double>& caps)
      : psi_(psi), caps_(caps) {}

  size_t size() const { return psi_.size(); }
  double cap(size_t i) const { return std::max(0.0, caps_[i]); }
  double Psi(size_t i, double a) const { return psi_[i].EvalByParts(a); }
  // Left and right marginals of g̃_i(a) - ∫_0^a Ψ_i.
  double Left(size_t i, double a) const {
    return psi_[i].current().SupergradientAt(a).left - Psi(i, a);
  }
  double Right(size_t i, double a) const {
    return psi_[i].current().SupergradientAt(a).right - Psi(i, a);
  }

  double Curv(size_t i, double a) const {
    return psi_[i].current().SecondDerivative(a);
  }

  // sup{a in [lo, hi] : Left(a) >= mu}, with lo known to qualify.
  double Demand(size_t i, double mu, double lo, double hi) const {
    if (cap(i) <= 0.0) return 0.0;
    if (Left(i, 0.0) < mu) return 0.0;
    if (Left(i, hi) >= mu) return hi;
    for (int iter = 0; iter < 200 && hi - lo > 1e-14 * cap(i); ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (Left(i, mid) >= mu) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  }

  double Residual(const std::vector<double>& a, double mu,
                  double budget) const {
    double res = 0.0;
    double total = 0.0;
    for (size_t i = 0; i < size(); ++i) {
      total += a[i];
      if (cap(i) <= 0.0) continue;
      // Marginal range over a 1e-9 neighbourhood, so that a point that
      // rounds to one side of a kink still sees both slopes.
      const double eps = 1e-9 * std::max(1.0, cap(i));
      const double hi =
          std::max(Left(i, a[i]), Left(i, std::max(0.0, a[i] - eps)));
      const double lo =
          std::min(Right(i, a[i]), Right(i, std::min(cap(i), a[i] + eps)));
      if (a[i] <= 0.0) {
        res = std::max(res, lo - mu);
      } else if (a[i] >= cap(i)) {
        res = std::max(res, mu - hi);
      } else {
        res = std::max({res, mu - hi, lo - mu});
      }
    }
    if (total < budget * (1.0 - 1e-12)) res = std::max(res, mu);
    return std::max(0.0, res);
  }

 private:
  std::vector<PsiEvaluator>& psi_;
  const std::vector<double>& caps_;
};

AatResult WaterFill(const AatProblem& p, double budget) {
  const size_t n = p.size();
  AatResult out;
  std::vector<double> a_lo(n), a_hi(n, 0.0);
  double total_lo = 0.0;
  double mu_hi = 0.0;
  for (size_t i = 0; i < n; ++i) {
    a_lo[i] = p.Demand(i, 0.0, 0.0, p.cap(i));
    total_lo += a_lo[i];
    if (p.cap(i) > 0.0) mu_hi = std::max(mu_hi, p.Left(i, 0.0));
  }
  if (total_lo <= budget || mu_hi <= 0.0) {
    out.a = a_lo;
    // Marginal values are zero on [0, a_lo] when mu_hi <= 0, so any
    // scaling that fits the budget is optimal.
    if (total_lo > budget) {
      for (double& x : out.a) x *= budget / total_lo;
    }
    out.multiplier = 0.0;
    out.kkt_residual = p.Residual(out.a, 0.0, budget);
    return out;
  }
  double mu_lo = 0.0;
  mu_hi = mu_hi * (1.0 + 1e-12) + 1e-300;
  double total_hi = 0.0;
  std::vector<double> trial(n);
  int iter = 0;
  for (; iter < 200 && mu_hi - mu_lo > 1e-13 * (1.0 + mu_hi); ++iter) {
    const double mu = 0.5 * (mu_lo + mu_hi);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      trial[i] = p.Demand(i, mu, a_hi[i], a_lo[i]);
      total += trial[i];
    }
    if (total > budget) {
      mu_lo = mu;
      a_lo = trial;
      total_lo = total;
    } else {
      mu_hi = mu;
      a_hi = trial;
      total_hi = total;
    }
  }
  const double w = total_lo > total_hi
                       ? std::clamp((budget - total_hi) / (total_lo - total_hi),
                                    0.0, 1.0)
                       : 0.0;
  out.a.resize(n);
  for (size_t i = 0; i < n; ++i) out.a[i] = a_hi[i] + w * (a_lo[i] - a_hi[i]);
  out.multiplier = 0.5 * (mu_lo + mu_hi);
  out.iterations = iter;
  out.kkt_residual = p.Residual(out.a, out.multiplier, budget);
  return out;
}

AatResult ProjectedGradient(const AatProblem& p,
                            const std::vector<double>& caps, double budget,
                            double kkt_tol, int max_iters) {
  const size_t n = p.size();
  // Curvature of g̃ plus the Lipschitz constant of Ψ, from 9 samples per item.
  double lip = 0.0;
  double grad_scale = 0.0;
  double cap_scale = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double c = p.cap(i);
    if (c <= 0.0) continue;
    cap_scale = std::max(cap_scale, c);
    grad_scale = std::max(grad_scale, std::abs(p.Right(i, 0.0)));
    double prev_psi = p.Psi(i, 0.0);
    double item = 0.0;
    for (int k = 1; k <= 8; ++k) {
      const double a = c * k / 8.0;
      const double psi = p.Psi(i, a);
      item = std::max(item, (psi - prev_psi) / (c / 8.0));
      prev_psi = psi;
    }
    for (int k = 0; k <= 8; ++k) {
      item = std::max(item, std::abs(p.Curv(i, c * k / 8.0)));
    }
    lip = std::max(lip, item);
  }
  double L = lip;
  if (!(L > 0.0)) {
    L = cap_scale > 0.0 ? std::max(grad_scale, 1e-12) / cap_scale : 1.0;
  }

  AatResult out;
  std::vector<double> a(n, 0.0), grad(n), next_grad(n), y(n);
  auto gradient = [&](const std::vector<double>& x, std::vector<double>& g) {
    for (size_t i = 0; i < n; ++i) {
      g[i] = p.cap(i) <= 0.0 ? 0.0
                             : (x[i] >= p.cap(i) ? p.Left(i, x[i])
                                                 : p.Right(i, x[i]));
    }
  };
  double best_res = std::numeric_limits<double>::infinity();
  std::vector<double> best = a;
  gradient(a, grad);
  for (int iter = 0; iter < max_iters; ++iter) {
    std::vector<double> next;
    // Backtracking on the local Lipschitz constant of the gradient; the
    // sampled estimate misses steep stretches of Ψ.
    for (int bt = 0; bt < 60; ++bt) {
      for (size_t i = 0; i < n; ++i) y[i] = a[i] + grad[i] / L;
      next = ProjectCappedSimplex(y, caps, budget);
      gradient(next, next_grad);
      double step2 = 0.0, change2 = 0.0;
      for (size_t i = 0; i < n; ++i) {
        step2 += (next[i] - a[i]) * (next[i] - a[i]);
        change2 += (next_grad[i] - grad[i]) * (next_grad[i] - grad[i]);
      }
      if (change2 <= L * L * step2) break;
      L *= 2.0;
    }
    double res = 0.0;
    for (size_t i = 0; i < n; ++i) {
      res = std::max(res, L * std::abs(next[i] - a[i]));
    }
    if (res < best_res) {
      best_res = res;
      best = a;
    }
    out.iterations = iter + 1;
    if (res <= kkt_tol) break;
    a.swap(next);
    grad.swap(next_grad);
  }
  out.a = best;
  out.kkt_residual = best_res;
  return out;
}

}  // namespace

AatResult SolveAat(std::vector<PsiEvaluator>& psi,
                   const std::vector<double>& caps, double budget,
                   AatMethod method, const Tolerances& /*tol*/,
                   double kkt_tol, int max_iters) {
  if (psi.size() != caps.size()) {
    throw DomainError("one cap per inventory required");
  }
  if (budget < 0.0) throw DomainError("allowance budget must be >= 0");
  AatProblem problem(psi, caps);
  AatResult out = method == AatMethod::kWaterFilling
                      ? WaterFill(problem, budget)
                      : ProjectedGradient(problem, caps, budget, kkt_tol,
                                          max_iters);
  if (out.kkt_residual > kkt_tol) {
    std::ostringstream msg;
    msg << "allowance split stopped with KKT residual " << out.kkt_residual;
    throw NonConvergenceError(msg.str(), 0.0, out.kkt_residual);
  }
  return out;
}

RunReport RunAnp(const Instance& instance, const AnpOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Tolerances& tol = options.tol;
  const int T = instance.num_slots();
  const int N = instance.num_inventories();
  const double theta = instance.theta();
  const double pi =
      options.pi > 0.0
          ? options.pi
          : (instance.revenue_class() == RevenueClass::kPriceElastic
                 ? PiTwo(theta)
                 : PiOne(theta));
  const bool small = options.mode == AnpMode::kSmall ||
                     (options.mode == AnpMode::kAuto && N <= pi);
  if (!small && pi < 1.0) throw DomainError("A&P_l needs pi >= 1");
  const double alpha = small ? 0.0 : Alpha(pi);
  const double kkt_tol = tol.kkt_rel * instance.p_max();

  RunReport report;
  report.instance_id = InstanceId(instance);
  report.algorithm = small ? "anp_small" : "anp_large";
  report.pi = pi;
  report.allocation.v = ZeroMatrix(T, N);
  report.allocation.a = ZeroMatrix(T, N);

  std::vector<PursuitState> states;
  states.reserve(N);
  for (int i = 0; i < N; ++i) states.emplace_back(pi, instance.capacity(i), tol);

  double rate_excess = 0.0;       // v̂ - â / π
  double aug_allowance = 0.0;     // Σ â - π A
  double aug_rate = 0.0;          // â - π δ
  double kkt_max = 0.0;
  double kkt_budget = 0.0;
  double quad_budget = 0.0;
  double step1_excess = -std::numeric_limits<double>::infinity();
  double step1_min_fraction = std::numeric_limits<double>::infinity();
  double tol_total = 0.0;
  OfflineSolution last_opt;
  bool have_last_opt = false;

  for (int t = 0; t < T; ++t) {
    if (small) {
      for (int i = 0; i < N; ++i) {
        const RevenueFunction& g = instance.revenue(t, i);
        report.allocation.a[t][i] = g.delta();
        const double v = states[i].Step(g);
        report.allocation.v[t][i] = v;
        rate_excess = std::max(rate_excess, v - g.delta() / pi);
      }
      continue;
    }

    const double budget = pi * instance.allowance(t);
    std::vector<double> caps(N);
    std::vector<PsiEvaluator> psi;
    psi.reserve(N);
    for (int i = 0; i < N; ++i) {
      const RevenueFunction& g = instance.revenue(t, i);
      caps[i] = pi * g.delta();
      psi.emplace_back(states[i].functions(), ScaledRevenue(g, pi),
                       instance.capacity(i), pi, tol);
    }
    const AatResult split =
        SolveAat(psi, caps, budget, options.aat_method, tol, kkt_tol);
    kkt_max = std::max(kkt_max, split.kkt_residual);
    kkt_budget += split.kkt_residual * budget;
    quad_budget += tol.quad_rel * (1.0 + instance.p_max()) * budget;

    double slot_total = 0.0;
    for (int i = 0; i < N; ++i) {
      const RevenueFunction& g = instance.revenue(t, i);
      const double a_hat = std::clamp(split.a[i], 0.0, caps[i]);
      slot_total += split.a[i];
      aug_rate = std::max(aug_rate, split.a[i] - caps[i]);
      report.allocation.a[t][i] = a_hat;
      const RevenueFunction history = ScaledRevenue(g, pi).WithRateLimit(a_hat);
      const double v = states[i].Advance(history, g);
      report.allocation.v[t][i] = v;
      rate_excess = std::max(rate_excess, v - a_hat / pi);
    }
    aug_allowance = std::max(aug_allowance, slot_total - budget);

    if (options.check_prefix || t == T - 1) {
      MultiOptions mo;
      mo.tol = tol;
      last_opt = SolveMulti(instance, t + 1, mo);
      have_last_opt = t == T - 1;
      double sum_tilde = 0.0;
      double gaps = alpha * last_opt.gap;
      for (const PursuitState& s : states) {
        sum_tilde += s.opt();
        gaps += s.max_solver_gap();
      }
      tol_total = gaps + kkt_budget + quad_budget;
      if (options.check_prefix) {
        step1_excess = std::max(
            step1_excess, alpha * last_opt.objective - sum_tilde - tol_total);
        if (last_opt.objective > 0.0) {
          step1_min_fraction = std::min(
              step1_min_fraction, sum_tilde / (alpha * last_opt.objective));
        }
      }
    }
  }

  report.online = Objective(instance, report.allocation.v);
  report.allocation.objective = report.online;
  if (!have_last_opt) {
    MultiOptions mo;
    mo.tol = tol;
    last_opt = SolveMulti(instance, T, mo);
  }
  report.offline = last_opt.objective;
  report.gap = last_opt.gap;
  report.bound = small ? pi : LargeNRatio(pi);

  double eta_err = 0.0;
  double opt_scale = 0.0;
  double breach = 0.0;
  for (const PursuitState& s : states) {
    eta_err = std::max(eta_err, std::abs(s.online_value() - s.opt() / pi));
    opt_scale = std::max(opt_scale, s.opt());
    breach = std::max(breach, s.max_breach());
  }
  report.AddCheck("pursuit_identity", eta_err, T * 1e-9 * (1.0 + opt_scale));
  report.AddCheck("rate_per_pi", rate_excess, tol.feas);
  if (!small) {
    report.AddCheck("augmented_allowance", aug_allowance, tol.feas);
    report.AddCheck("augmented_rate", aug_rate, tol.feas);
    report.AddCheck("aat_kkt", kkt_max, kkt_tol);
    if (options.check_prefix) {
      report.AddCheck("step1_fraction", step1_excess, 0.0);
      if (std::isfinite(step1_min_fraction)) {
        report.metrics["step1_min_fraction"] = step1_min_fraction;
      }
      report.metrics["step1_tol_total"] = tol_total;
    }
  }
  const FeasibilityReport feas =
      CheckFeasibility(instance, report.allocation.v, tol.feas);
  report.AddCheck("capacity", feas.max_capacity_violation, tol.feas);
  report.AddCheck("allowance", feas.max_allowance_violation, tol.feas);
  report.AddCheck("rate", feas.max_rate_violation, tol.feas);
  report.AddCheck("nonnegative", -feas.min_value, tol.feas);
  report.AddCheck("root_breach", breach, 10.0 * tol.root);
  if (breach > 0.0) {
    std::ostringstream msg;
    msg << "pursuit target exceeded g(delta) by " << breach;
    report.warnings.push_back(msg.str());
  }

  FinalizeRatio(report, N * T * tol.root, tol);
  if (report.bound > 0.0 && std::isfinite(report.ratio)) {
    report.metrics["tightness"] = report.ratio / report.bound;
  }
  report.elapsed_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return report;
}

}  // namespace mialloc
