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

#ifndef MIALLOC_SUITE_H_
#define MIALLOC_SUITE_H_

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "mialloc/instance.h"
#include "mialloc/report.h"
#include "mialloc/tolerances.h"

namespace mialloc {

// Algorithm names: "cr_pursuit", "anp", "anp_small", "anp_large",
// "primal_dual". π <= 0 picks the default for the instance class.
RunReport RunAlgorithm(const std::string& algorithm, const Instance& instance,
                       double pi = 0.0, const Tolerances& tol = {});

// True when `algorithm` accepts `instance` (CR-Pursuit needs N = 1, the
// threshold baseline a gradient-bounded instance).
bool Applicable(const std::string& algorithm, const Instance& instance);

struct SuiteError {
  std::string instance_id;
  std::string algorithm;
  std::string message;
};

// Grid oracle against the offline solver on a small instance.
struct OracleCheck {
  std::string instance_id;
  double oracle = 0.0;
  double solver = 0.0;
  double slack = 0.0;  // p_max * step * T * N + 1e-6
  bool passed = true;
};

struct SuiteReport {
  std::vector<RunReport> runs;  // sorted by instance id, then algorithm
  std::vector<SuiteError> errors;
  std::vector<OracleCheck> oracle_checks;
  std::map<std::string, double> worst_ratio;      // per algorithm
  std::map<std::string, double> worst_tightness;  // ratio / bound
  int bound_violations = 0;
  int check_failures = 0;

  // 0 when every bound, check and oracle comparison held and no run failed.
  int ExitCode() const;
};

// Config document:
//   {"algorithms": [...], "jobs": 1, "grid_step": 0.25,
//    "oracle_max_cells": 6, "tolerance": {"gap_rel": 1e-6, ...},
//    "instances": [
//      {"generator": "random", "seeds": [1, 2], "N": [1, 3], "T": [4],
//       "theta": [2, 10], "class": "gradient_bounded"},
//      {"generator": "staircase", "theta": [...], "T": [...], "N": [...],
//       "C": 1.0},
//      {"generator": "file", "path": "instance.json"}]}
// Expands the instance list in document order.
std::vector<Instance> ExpandInstances(const nlohmann::json& config);

struct SuiteOptions {
  int jobs = 1;                 // <= 0 uses the config value
  double grid_step = 0.0;       // <= 0 uses the config value
  double gap_rel = 0.0;         // <= 0 uses the config value
};

SuiteReport RunSuite(const nlohmann::json& config,
                     const SuiteOptions& options = {});

nlohmann::ordered_json SuiteToJson(const SuiteReport& report);
std::string SuiteToCsv(const SuiteReport& report);

}  // namespace mialloc

#endif  // MIALLOC_SUITE_H_
