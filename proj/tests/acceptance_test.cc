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


// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mialloc/anp.h"
#include "mialloc/baseline_pd.h"
#include "mialloc/cr_pursuit.h"
#include "mialloc/cr_table.h"
#include "mialloc/instance.h"
#include "mialloc/instance_io.h"
#include "mialloc/offline.h"
#include "mialloc/report.h"
#include "mialloc/suite.h"

#ifndef MIALLOC_SOURCE_DIR
#define MIALLOC_SOURCE_DIR "."
#endif

namespace mialloc {
namespace {

const double kE = std::exp(1.0);
const Tolerances kTol;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& why) {
    if (!ok && pass) detail = why;
    pass = pass && ok;
  }
};

std::string Str(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

bool CheckPassed(const RunReport& r, const std::string& name) {
  for (const Check& c : r.checks) {
    if (c.name == name) return c.passed;
  }
  return false;
}

struct SuiteData {
  SuiteReport report;
  std::map<std::string, Instance> instances;
};

SuiteData LoadDeskSuite() {
  std::ifstream in(std::string(MIALLOC_SOURCE_DIR) + "/configs/desk.json");
  const nlohmann::json config = nlohmann::json::parse(in);
  SuiteData data;
  for (Instance& inst : ExpandInstances(config)) {
    data.instances.emplace(InstanceId(inst), std::move(inst));
  }
  SuiteOptions options;
  options.jobs = 1;
  data.report = RunSuite(config, options);
  return data;
}

bool AllSlopesEqual(const Instance& inst) {
  return inst.p_min() == inst.p_max();
}

// Runs CR-Pursuit(π₁) on every single-inventory suite instance.
Outcome PursuitIdentity(const SuiteData& d) {
  Outcome o;
  int count = 0;
  for (const auto& [id, inst] : d.instances) {
    if (inst.num_inventories() != 1) continue;
    const int T = inst.num_slots();
    const double pi = PiOne(inst.theta());
    const RunReport r = RunCrPursuit(inst, pi);
    ++count;
    o.Require(std::abs(r.online - r.offline / pi) <=
                  T * 1e-9 * (1.0 + r.offline),
              "pursuit identity off by " + Str(std::abs(r.online - r.offline / pi)));
    double total = 0.0;
    for (int t = 0; t < T; ++t) {
      const double v = r.allocation.v[t][0];
      total += v;
      o.Require(v <= inst.revenue(t, 0).delta() / pi + 1e-8,
                "rate bound broken on " + id);
    }
    o.Require(total <= inst.capacity(0) + 1e-8, "capacity broken on " + id);
  }
  o.Require(count > 0, "no single-inventory instances");
  if (o.pass) o.detail = std::to_string(count) + " instances";
  return o;
}

Outcome SmallN(const SuiteData& d) {
  Outcome o;
  int count = 0;
  for (const RunReport& r : d.report.runs) {
    if (r.algorithm != "anp_small") continue;
    const Instance& inst = d.instances.at(r.instance_id);
    if (inst.revenue_class() != RevenueClass::kGradientBounded) continue;
    const double pi = PiOne(inst.theta());
    if (!(inst.num_inventories() <= pi)) continue;
    ++count;
    o.Require(r.ratio - r.uncertainty <= pi + kTol.bound,
              "ratio " + Str(r.ratio) + " above pi1 " + Str(pi));
    o.Require(CheckFeasibility(inst, r.allocation.v, 1e-8).ok(),
              "infeasible allocation on " + r.instance_id);
  }
  o.Require(count > 0, "no small-N runs");
  if (o.pass) o.detail = std::to_string(count) + " runs";
  return o;
}

Outcome LargeN(const SuiteData& d) {
  Outcome o;
  int count = 0;
  double worst = 0.0;
  for (const RunReport& r : d.report.runs) {
    if (r.algorithm != "anp_large") continue;
    const Instance& inst = d.instances.at(r.instance_id);
    if (inst.revenue_class() != RevenueClass::kGradientBounded) continue;
    const double pi = PiOne(inst.theta());
    if (!(inst.num_inventories() > pi)) continue;
    ++count;
    const double bound = LargeNRatio(pi);
    worst = std::max(worst, (r.ratio - r.uncertainty) / bound);
    o.Require(r.ratio - r.uncertainty <= bound + kTol.bound,
              "ratio " + Str(r.ratio) + " above " + Str(bound));
    o.Require(CheckPassed(r, "step1_fraction"),
              "per-prefix Step-I check failed on " + r.instance_id);
    o.Require(CheckFeasibility(inst, r.allocation.v, 1e-8).ok(),
              "infeasible allocation on " + r.instance_id);
  }
  o.Require(count > 0, "no large-N runs");
  if (o.pass) o.detail = std::to_string(count) + " runs, worst ratio/bound " + Str(worst);
  return o;
}

Outcome AlphaAnchors() {
  Outcome o;
  o.Require(std::abs(Alpha(1.0) - (kE - 1.0) / kE) <= 1e-12, "alpha(1)");
  for (double pi : {1.0, 1.5, 2.0, 3.0, 10.0}) {
    const double r = std::exp(1.0 / pi);
    o.Require(std::abs(Alpha(pi) * r / (r - 1.0) - pi) <= 1e-12,
              "alpha identity at pi=" + Str(pi));
  }
  return o;
}

Outcome ThetaOne(const SuiteData& d) {
  Outcome o;
  int count = 0;
  const double bound = kE / (kE - 1.0);
  for (const RunReport& r : d.report.runs) {
    if (r.algorithm.rfind("anp", 0) != 0) continue;
    const Instance& inst = d.instances.at(r.instance_id);
    if (!AllSlopesEqual(inst)) continue;
    ++count;
    o.Require(r.ratio - r.uncertainty <= bound + kTol.bound,
              "ratio " + Str(r.ratio) + " above e/(e-1)");
  }
  const ChiValues c = Chi(1.0);
  o.Require(std::abs(c.chi - 1.0) <= 1e-9, "chi(1)");
  o.Require(std::abs(c.chi_tilde - bound) <= 1e-9, "chi_tilde(1)");
  o.Require(count > 0, "no theta = 1 runs");
  if (o.pass) o.detail = std::to_string(count) + " runs";
  return o;
}

Outcome Baseline(const SuiteData& d) {
  Outcome o;
  int count = 0;
  for (const RunReport& r : d.report.runs) {
    if (r.algorithm != "primal_dual") continue;
    const Instance& inst = d.instances.at(r.instance_id);
    ++count;
    const double bound = Chi(inst.theta()).chi_tilde;
    o.Require(r.ratio - r.uncertainty <= bound + kTol.bound,
              "ratio " + Str(r.ratio) + " above chi_tilde " + Str(bound));
  }
  o.Require(count > 0, "no baseline runs");
  const std::vector<double> thetas = {1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 60.0};
  for (double theta : thetas) {
    for (double C : {0.25, 1.0, 5.0}) {
      const double p_min = 1.0;
      const double p_max = theta;
      const Threshold phi(p_min, p_max, C);
      const double h = C * 1e-6;
      const double tol = 1e-6 * p_max;
      for (int k = 1; k <= 1000; ++k) {
        const double w = C * k / 1001.0;
        if (std::abs(w - phi.split()) <= 2.0 * h) continue;
        const double dphi = (phi(w + h) - phi(w - h)) / (2.0 * h);
        if (w < phi.split()) {
          o.Require(C * dphi - phi(w) <= p_min * (phi.chi_tilde() - 1.0) + tol,
                    "condition 1 at theta=" + Str(theta));
        } else {
          o.Require(C * dphi - phi.chi_tilde() * phi(w) <= tol,
                    "condition 2 at theta=" + Str(theta));
        }
      }
    }
    const double pi = PiOne(theta);
    const double chi_tilde = Chi(theta).chi_tilde;
    o.Require(pi <= chi_tilde && chi_tilde <= LargeNRatio(pi),
              "sandwich at theta=" + Str(theta));
  }
  if (o.pass) o.detail = std::to_string(count) + " runs";
  return o;
}

// Random concave piecewise-linear function with 1 to 3 pieces.
RevenueFunction RandomPiecewise(std::mt19937_64& rng, double delta) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int pieces = 1 + static_cast<int>(rng() % 3);
  std::vector<double> slopes(pieces), breaks(pieces - 1);
  for (double& s : slopes) s = 1.0 + 5.0 * u(rng);
  std::sort(slopes.rbegin(), slopes.rend());
  for (double& b : breaks) b = delta * (0.05 + 0.9 * u(rng));
  std::sort(breaks.begin(), breaks.end());
  return RevenueFunction::PiecewiseLinear(slopes, breaks, delta);
}

Outcome PsiProperties() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int samples = 0;
  double worst = 0.0;
  for (; samples < 60; ++samples) {
    const double pi = 1.0 + 3.0 * u(rng);
    const double C = 0.3 + 1.5 * u(rng);
    std::vector<RevenueFunction> history;
    const int past = static_cast<int>(rng() % 4);
    for (int k = 0; k < past; ++k) {
      history.push_back(RandomPiecewise(rng, pi * (0.2 + u(rng))));
    }
    PsiEvaluator psi(history, RandomPiecewise(rng, pi * (0.2 + u(rng))), C, pi);
    const double top = psi.current().delta();
    double prev_quad = -1.0;
    double prev_parts = -1.0;
    for (int k = 0; k <= 10; ++k) {
      const double a = top * k / 10.0;
      const double quad = psi.Eval(a);
      const double parts = psi.EvalByParts(a);
      const double limit = 10.0 * kTol.quad_rel * (1.0 + std::abs(parts));
      worst = std::max(worst, std::abs(quad - parts) / limit);
      o.Require(std::abs(quad - parts) <= limit,
                "forms disagree by " + Str(std::abs(quad - parts)));
      o.Require(parts >= prev_parts - 1e-12 && quad >= prev_quad - limit,
                "Psi decreases");
      prev_quad = quad;
      prev_parts = parts;
    }
  }
  if (o.pass) {
    o.detail = std::to_string(samples) + " samples, worst diff/limit " + Str(worst);
  }
  return o;
}

Outcome OracleEquivalence(const SuiteData& d) {
  Outcome o;
  int count = 0;
  for (const OracleCheck& c : d.report.oracle_checks) {
    const Instance& inst = d.instances.at(c.instance_id);
    if (inst.num_slots() * inst.num_inventories() > 6) continue;
    ++count;
    o.Require(c.oracle <= c.solver + 1e-6 && c.solver <= c.oracle + c.slack,
              "solver " + Str(c.solver) + " vs grid " + Str(c.oracle));
  }
  o.Require(count >= 30, "only " + std::to_string(count) + " oracle checks");
  if (o.pass) o.detail = std::to_string(count) + " instances";
  return o;
}

Outcome PriceElastic(const SuiteData& d) {
  Outcome o;
  int count = 0;
  for (const RunReport& r : d.report.runs) {
    if (r.algorithm.rfind("anp", 0) != 0) continue;
    const Instance& inst = d.instances.at(r.instance_id);
    if (inst.revenue_class() != RevenueClass::kPriceElastic) continue;
    ++count;
    const double pi = 2.0 * (std::log(inst.theta()) + 1.0);
    o.Require(std::abs(r.pi - pi) <= 1e-12, "pi is not pi2");
    const double bound =
        inst.num_inventories() <= pi ? pi : LargeNRatio(pi);
    o.Require(r.ratio - r.uncertainty <= bound + kTol.bound,
              "ratio " + Str(r.ratio) + " above " + Str(bound));
    o.Require(CheckFeasibility(inst, r.allocation.v, 1e-8).ok(),
              "infeasible allocation on " + r.instance_id);
  }
  o.Require(count > 0, "no price-elastic runs");
  if (o.pass) o.detail = std::to_string(count) + " runs";
  return o;
}

Outcome Table() {
  Outcome o;
  const std::vector<double> thetas = ParseThetaGrid("1..60");
  const std::string a = CrTableCsv(CrTable(thetas, 3));
  const std::string b = CrTableCsv(CrTable(thetas, 3));
  std::ifstream in(std::string(MIALLOC_SOURCE_DIR) + "/tests/data/cr_table_n3.csv",
                   std::ios::binary);
  std::ostringstream golden;
  golden << in.rdbuf();
  o.Require(a == b, "table differs between runs");
  o.Require(a == golden.str(), "table differs from the golden file");
  const auto rows = CrTable(thetas, 3);
  double first_pi_rule = 0.0;
  for (const CrTableRow& r : rows) {
    if (r.ours == r.pi_one) {
      first_pi_rule = r.theta;
      break;
    }
  }
  const double cross = std::exp(2.0);
  o.Require(first_pi_rule >= cross && first_pi_rule - 1.0 < cross,
            "crossover at theta=" + Str(first_pi_rule));
  if (o.pass) o.detail = "crossover between theta=" + Str(first_pi_rule - 1.0) +
                         " and " + Str(first_pi_rule);
  return o;
}

}  // namespace
}  // namespace mialloc

int main() {
  using namespace mialloc;
  const SuiteData data = LoadDeskSuite();
  const std::vector<std::pair<std::string, Outcome>> results = {
      {"pursuit identity and feasibility", PursuitIdentity(data)},
      {"small-N ratio", SmallN(data)},
      {"large-N ratio and Step-I fraction", LargeN(data)},
      {"alpha anchors", AlphaAnchors()},
      {"theta = 1 reduction", ThetaOne(data)},
      {"threshold baseline", Baseline(data)},
      {"Psi properties", PsiProperties()},
      {"oracle equivalence", OracleEquivalence(data)},
      {"price elasticity", PriceElastic(data)},
      {"ratio table", Table()},
  };
  int failed = 0;
  for (size_t k = 0; k < results.size(); ++k) {
    const auto& [name, out] = results[k];
    std::printf("%s %2zu %s: %s\n", out.pass ? "PASS" : "FAIL", k + 1,
                name.c_str(), out.detail.c_str());
    if (!out.pass) ++failed;
  }
  std::printf("suite: %zu runs, %zu errors, %d check failures\n",
              data.report.runs.size(), data.report.errors.size(),
              data.report.check_failures);
  return failed == 0 && data.report.errors.empty() ? 0 : 1;
}
