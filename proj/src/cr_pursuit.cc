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

#include "mialloc/cr_pursuit.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "mialloc/errors.h"
#include "mialloc/instance_io.h"
#include "mialloc/offline.h"

namespace mialloc {

double PiOne(double theta) {
  if (!(theta >= 1.0)) throw DomainError("theta must be >= 1");
  return std::log(theta) + 1.0;
}

PursuitState::PursuitState(double pi, double capacity, const Tolerances& tol)
    : pi_(pi), capacity_(capacity), tol_(tol) {
  if (!(pi > 0.0)) throw DomainError("pi must be positive");
  if (!(capacity >= 0.0)) throw DomainError("capacity must be nonnegative");
}

double PursuitState::Advance(const RevenueFunction& history_fn,
                             const RevenueFunction& own_fn) {
  functions_.push_back(history_fn);
  const SingleSolution sol = SolveSingle(functions_, capacity_, tol_);
  max_solver_gap_ = std::max(max_solver_gap_, sol.gap);

  Entry e;
  // OPT is nondecreasing in the history; a tiny negative increment is
  // solver noise.
  e.increment = std::max(0.0, sol.objective - opt_);
  opt_ = std::max(opt_, sol.objective);
  e.target = e.increment / pi_;
  const double top = own_fn.Eval(own_fn.delta());
  if (e.target > top) {
    e.breach = e.target - top;
    e.v = own_fn.delta();
  } else {
    e.v = own_fn.InverseEval(e.target);
  }
  max_breach_ = std::max(max_breach_, e.breach);
  online_value_ += own_fn.Eval(e.v);
  total_allocation_ += e.v;
  entries_.push_back(e);
  return e.v;
}

RunReport RunCrPursuit(const Instance& instance, double pi,
                       const Tolerances& tol) {
  if (instance.num_inventories() != 1) {
    throw DomainError("CR-Pursuit runs on single-inventory instances");
  }
  const auto start = std::chrono::steady_clock::now();
  const int T = instance.num_slots();
  PursuitState state(pi, instance.capacity(0), tol);

  RunReport report;
  report.instance_id = InstanceId(instance);
  report.algorithm = "cr_pursuit";
  report.pi = pi;
  report.allocation.v = ZeroMatrix(T, 1);
  report.allocation.a = ZeroMatrix(T, 1);

  double rate_excess = 0.0;
  for (int t = 0; t < T; ++t) {
    const RevenueFunction& g = instance.revenue(t, 0);
    const double v = state.Step(g);
    report.allocation.v[t][0] = v;
    report.allocation.a[t][0] = g.delta();
    rate_excess = std::max(rate_excess, v - g.delta() / pi);
  }
  report.online = Objective(instance, report.allocation.v);
  report.allocation.objective = report.online;
  report.offline = state.opt();
  report.gap = state.max_solver_gap();
  report.bound = pi;

  const double opt = state.opt();
  const double theta = instance.theta();
  report.AddCheck("pursuit_identity", std::abs(report.online - opt / pi),
                  T * 1e-9 * (1.0 + opt));
  report.AddCheck("rate_per_pi", rate_excess, tol.feas);
  const double phi_bound = PiOne(theta) * instance.capacity(0) / pi;
  if (instance.revenue_class() == RevenueClass::kGradientBounded) {
    report.AddCheck("total_allocation_bound",
                    state.total_allocation() - phi_bound, tol.feas);
  }
  report.AddCheck("capacity", state.total_allocation() - instance.capacity(0),
                  tol.feas);
  report.AddCheck("root_breach", state.max_breach(), 10.0 * tol.root);
  if (state.max_breach() > 0.0) {
    std::ostringstream msg;
    msg << "pursuit target exceeded g(delta) by " << state.max_breach();
    report.warnings.push_back(msg.str());
  }
  if (phi_bound > 0.0) {
    report.metrics["allocation_tightness"] =
        state.total_allocation() / phi_bound;
  }
  report.metrics["total_allocation"] = state.total_allocation();

  FinalizeRatio(report, T * tol.root, tol);
  report.elapsed_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return report;
}

}  // namespace mialloc
