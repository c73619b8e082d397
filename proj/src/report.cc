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

#include "mialloc/report.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace mialloc {

bool RunReport::AddCheck(const std::string& name, double value, double limit) {
  const bool passed = value <= limit;
  checks.push_back({name, passed, value, limit});
  return passed;
}

bool RunReport::ok() const {
  if (!bound_holds) return false;
  for (const Check& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

void FinalizeRatio(RunReport& report, double online_error,
                   const Tolerances& tol) {
  const double alg = report.online;
  const double opt = report.offline;
  if (alg <= 0.0) {
    report.ratio = opt <= tol.feas ? 1.0 : std::numeric_limits<double>::infinity();
    report.uncertainty = 0.0;
  } else {
    report.ratio = opt / alg;
    // Gap on OPT plus first-order error of OPT / ALG in ALG.
    report.uncertainty = report.gap / alg + opt * online_error / (alg * alg);
  }
  report.bound_holds =
      report.ratio - report.uncertainty <= report.bound + tol.bound;
}

nlohmann::ordered_json ReportToJson(const RunReport& report,
                                    bool with_allocation) {
  nlohmann::ordered_json j;
  j["instance_id"] = report.instance_id;
  j["algorithm"] = report.algorithm;
  j["pi"] = report.pi;
  j["online"] = report.online;
  j["offline"] = report.offline;
  j["gap"] = report.gap;
  j["ratio"] = std::isfinite(report.ratio) ? nlohmann::ordered_json(report.ratio)
                                           : nlohmann::ordered_json("inf");
  j["uncertainty"] = report.uncertainty;
  j["bound"] = report.bound;
  j["bound_holds"] = report.bound_holds;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const Check& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", c.value},
                      {"limit", c.limit}});
  }
  j["checks"] = checks;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.metrics) metrics[k] = v;
  j["metrics"] = metrics;
  j["warnings"] = report.warnings;
  if (with_allocation) {
    j["v"] = report.allocation.v;
    j["a"] = report.allocation.a;
  }
  j["elapsed_ms"] = report.elapsed_ms;
  return j;
}

std::string FormatCsvNumber(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string ReportCsvHeader() {
  return "instance_id,algorithm,pi,online,offline,gap,ratio,uncertainty,"
         "bound,bound_holds,checks_failed";
}

std::string ReportCsvRow(const RunReport& report) {
  int failed = 0;
  for (const Check& c : report.checks) failed += c.passed ? 0 : 1;
  std::ostringstream out;
  out << report.instance_id << ',' << report.algorithm << ','
      << FormatCsvNumber(report.pi) << ',' << FormatCsvNumber(report.online)
      << ',' << FormatCsvNumber(report.offline) << ','
      << FormatCsvNumber(report.gap) << ',' << FormatCsvNumber(report.ratio)
      << ',' << FormatCsvNumber(report.uncertainty) << ','
      << FormatCsvNumber(report.bound) << ','
      << (report.bound_holds ? "true" : "false") << ',' << failed;
  return out.str();
}

}  // namespace mialloc
