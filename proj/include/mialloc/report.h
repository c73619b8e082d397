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

#ifndef MIALLOC_REPORT_H_
#define MIALLOC_REPORT_H_

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "mialloc/instance.h"
#include "mialloc/tolerances.h"

namespace mialloc {

// One invariant or bound check inside a run: passed iff value <= limit.
struct Check {
  std::string name;
  bool passed = true;
  double value = 0.0;
  double limit = 0.0;
};

struct RunReport {
  std::string instance_id;
  std::string algorithm;
  double pi = 0.0;
  double online = 0.0;    // ALG
  double offline = 0.0;   // OPT
  double gap = 0.0;       // offline solver gap
  double ratio = 0.0;     // OPT / ALG
  double uncertainty = 0.0;
  double bound = 0.0;
  bool bound_holds = true;
  std::vector<Check> checks;
  // Reported quantities that are not asserted (tightness fractions, ...).
  std::map<std::string, double> metrics;
  std::vector<std::string> warnings;
  Allocation allocation;
  double elapsed_ms = 0.0;

  // Records a check and returns its outcome.
  bool AddCheck(const std::string& name, double value, double limit);
  // True when the bound holds and every check passed.
  bool ok() const;
};

// Fills ratio, uncertainty and bound_holds from online/offline/gap.
// `online_error` is an absolute error budget on the online objective.
void FinalizeRatio(RunReport& report, double online_error,
                   const Tolerances& tol);

nlohmann::ordered_json ReportToJson(const RunReport& report,
                                    bool with_allocation = false);

// Shortest text with 12 significant digits, as used in every CSV.
std::string FormatCsvNumber(double x);

// Fixed CSV schema shared by `run` and `suite`.
std::string ReportCsvHeader();
std::string ReportCsvRow(const RunReport& report);

}  // namespace mialloc

#endif  // MIALLOC_REPORT_H_
