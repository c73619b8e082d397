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

#include "mialloc/suite.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

#include "mialloc/anp.h"
#include "mialloc/baseline_pd.h"
#include "mialloc/cr_pursuit.h"
#include "mialloc/errors.h"
#include "mialloc/generators.h"
#include "mialloc/instance_io.h"
#include "mialloc/offline.h"

namespace mialloc {
namespace {

template <typename T>
std::vector<T> ListOf(const nlohmann::json& j, const char* key,
                      std::vector<T> fallback) {
  if (!j.contains(key)) return fallback;
  const nlohmann::json& v = j.at(key);
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

Tolerances TolerancesFrom(const nlohmann::json& config) {
  Tolerances tol;
  if (!config.contains("tolerance")) return tol;
  const nlohmann::json& j = config.at("tolerance");
  tol.root = j.value("root", tol.root);
  tol.feas = j.value("feas", tol.feas);
  tol.gap_rel = j.value("gap_rel", tol.gap_rel);
  tol.quad_rel = j.value("quad_rel", tol.quad_rel);
  tol.kkt_rel = j.value("kkt_rel", tol.kkt_rel);
  tol.bound = j.value("bound", tol.bound);
  return tol;
}

}  // namespace

bool Applicable(const std::string& algorithm, const Instance& instance) {
  if (algorithm == "cr_pursuit") return instance.num_inventories() == 1;
  if (algorithm == "primal_dual") {
    return instance.revenue_class() == RevenueClass::kGradientBounded;
  }
  return algorithm == "anp" || algorithm == "anp_small" ||
         algorithm == "anp_large";
}

RunReport RunAlgorithm(const std::string& algorithm, const Instance& instance,
                       double pi, const Tolerances& tol) {
  if (algorithm == "cr_pursuit") {
    if (pi <= 0.0) {
      pi = instance.revenue_class() == RevenueClass::kPriceElastic
               ? PiTwo(instance.theta())
               : PiOne(instance.theta());
    }
    return RunCrPursuit(instance, pi, tol);
  }
  if (algorithm == "primal_dual") return RunPrimalDual(instance, tol);
  AnpOptions options;
  options.pi = pi;
  options.tol = tol;
  if (algorithm == "anp") {
    options.mode = AnpMode::kAuto;
  } else if (algorithm == "anp_small") {
    options.mode = AnpMode::kSmall;
  } else if (algorithm == "anp_large") {
    options.mode = AnpMode::kLarge;
  } else {
    throw DomainError("unknown algorithm: " + algorithm);
  }
  return RunAnp(instance, options);
}

int SuiteReport::ExitCode() const {
  bool oracle_ok = std::all_of(oracle_checks.begin(), oracle_checks.end(),
                               [](const OracleCheck& c) { return c.passed; });
  return bound_violations == 0 && check_failures == 0 && errors.empty() &&
                 oracle_ok
             ? 0
             : 1;
}

std::vector<Instance> ExpandInstances(const nlohmann::json& config) {
  std::vector<Instance> out;
  if (!config.contains("instances")) return out;
  for (const nlohmann::json& spec : config.at("instances")) {
    const std::string gen = spec.at("generator").get<std::string>();
    if (gen == "file") {
      out.push_back(ReadInstanceFile(spec.at("path").get<std::string>()));
    } else if (gen == "staircase") {
      const double c = spec.value("C", 1.0);
      for (double theta : ListOf<double>(spec, "theta", {std::exp(1.0)})) {
        for (int T : ListOf<int>(spec, "T", {4})) {
          for (int N : ListOf<int>(spec, "N", {1})) {
            out.push_back(GenStaircase(theta, T, c, N));
          }
        }
      }
    } else if (gen == "random") {
      std::vector<std::uint64_t> seeds =
          ListOf<std::uint64_t>(spec, "seeds", {});
      if (seeds.empty()) {
        const std::uint64_t base = spec.value("seed_base", std::uint64_t{1});
        const int count = spec.value("count", 1);
        for (int k = 0; k < count; ++k) seeds.push_back(base + k);
      }
      const RevenueClass cls =
          ParseClass(spec.value("class", std::string("gradient_bounded")));
      for (double theta : ListOf<double>(spec, "theta", {2.0})) {
        for (int N : ListOf<int>(spec, "N", {1})) {
          for (int T : ListOf<int>(spec, "T", {4})) {
            for (std::uint64_t seed : seeds) {
              out.push_back(GenRandom(seed, N, T, theta, cls));
            }
          }
        }
      }
    } else {
      throw DomainError("unknown generator: " + gen);
    }
  }
  return out;
}

SuiteReport RunSuite(const nlohmann::json& config,
                     const SuiteOptions& options) {
  Tolerances tol = TolerancesFrom(config);
  if (options.gap_rel > 0.0) tol.gap_rel = options.gap_rel;
  const int jobs = std::max(
      1, options.jobs > 0 ? options.jobs : config.value("jobs", 1));
  const double grid_step = options.grid_step > 0.0
                               ? options.grid_step
                               : config.value("grid_step", 0.25);
  const int oracle_cells = config.value("oracle_max_cells", 0);
  const std::vector<std::string> algorithms =
      ListOf<std::string>(config, "algorithms", {});
  for (const std::string& alg : algorithms) {
    if (alg != "cr_pursuit" && alg != "anp" && alg != "anp_small" &&
        alg != "anp_large" && alg != "primal_dual") {
      throw DomainError("unknown algorithm: " + alg);
    }
  }

  const std::vector<Instance> instances = ExpandInstances(config);
  std::vector<std::string> ids;
  for (const Instance& inst : instances) ids.push_back(InstanceId(inst));

  struct Task {
    size_t instance;
    std::string algorithm;  // empty for an oracle check
  };
  std::vector<Task> tasks;
  for (size_t k = 0; k < instances.size(); ++k) {
    for (const std::string& alg : algorithms) {
      if (Applicable(alg, instances[k])) tasks.push_back({k, alg});
    }
    if (instances[k].num_slots() * instances[k].num_inventories() <=
        oracle_cells) {
      tasks.push_back({k, ""});
    }
  }

  SuiteReport report;
  std::mutex mu;
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t k = next++; k < tasks.size(); k = next++) {
      const Task& task = tasks[k];
      const Instance& inst = instances[task.instance];
      try {
        if (task.algorithm.empty()) {
          OracleCheck check;
          check.instance_id = ids[task.instance];
          check.oracle = OracleGrid(inst, grid_step);
          MultiOptions mo;
          mo.tol = tol;
          check.solver = SolveMulti(inst, inst.num_slots(), mo).objective;
          check.slack = inst.p_max() * grid_step * inst.num_slots() *
                            inst.num_inventories() +
                        1e-6;
          check.passed = check.oracle <= check.solver + 1e-6 &&
                         check.solver <= check.oracle + check.slack;
          std::lock_guard<std::mutex> lock(mu);
          report.oracle_checks.push_back(check);
          continue;
        }
        RunReport run = RunAlgorithm(task.algorithm, inst, 0.0, tol);
        std::lock_guard<std::mutex> lock(mu);
        report.runs.push_back(std::move(run));
      } catch (const BudgetExceededError&) {
        // The grid is too fine for this instance; no comparison is made.
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        report.errors.push_back({ids[task.instance],
                                 task.algorithm.empty() ? "oracle"
                                                        : task.algorithm,
                                 e.what()});
      }
    }
  };
  std::vector<std::thread> threads;
  for (int j = 1; j < jobs; ++j) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();

  std::sort(report.runs.begin(), report.runs.end(),
            [](const RunReport& a, const RunReport& b) {
              return std::tie(a.instance_id, a.algorithm) <
                     std::tie(b.instance_id, b.algorithm);
            });
  std::sort(report.errors.begin(), report.errors.end(),
            [](const SuiteError& a, const SuiteError& b) {
              return std::tie(a.instance_id, a.algorithm, a.message) <
                     std::tie(b.instance_id, b.algorithm, b.message);
            });
  std::sort(report.oracle_checks.begin(), report.oracle_checks.end(),
            [](const OracleCheck& a, const OracleCheck& b) {
              return a.instance_id < b.instance_id;
            });
  for (const RunReport& run : report.runs) {
    double& worst = report.worst_ratio[run.algorithm];
    worst = std::max(worst, run.ratio);
    if (run.bound > 0.0) {
      double& tight = report.worst_tightness[run.algorithm];
      tight = std::max(tight, run.ratio / run.bound);
    }
    if (!run.bound_holds) ++report.bound_violations;
    for (const Check& c : run.checks) {
      if (!c.passed) ++report.check_failures;
    }
  }
  return report;
}

nlohmann::ordered_json SuiteToJson(const SuiteReport& report) {
  nlohmann::ordered_json j;
  j["runs"] = nlohmann::ordered_json::array();
  for (const RunReport& run : report.runs) j["runs"].push_back(ReportToJson(run));
  j["worst_ratio"] = report.worst_ratio;
  j["worst_tightness"] = report.worst_tightness;
  j["bound_violations"] = report.bound_violations;
  j["check_failures"] = report.check_failures;
  j["oracle_checks"] = nlohmann::ordered_json::array();
  for (const OracleCheck& c : report.oracle_checks) {
    j["oracle_checks"].push_back({{"instance_id", c.instance_id},
                                  {"oracle", c.oracle},
                                  {"solver", c.solver},
                                  {"slack", c.slack},
                                  {"passed", c.passed}});
  }
  j["errors"] = nlohmann::ordered_json::array();
  for (const SuiteError& e : report.errors) {
    j["errors"].push_back({{"instance_id", e.instance_id},
                           {"algorithm", e.algorithm},
                           {"message", e.message}});
  }
  return j;
}

std::string SuiteToCsv(const SuiteReport& report) {
  std::string out = ReportCsvHeader() + "\n";
  for (const RunReport& run : report.runs) out += ReportCsvRow(run) + "\n";
  return out;
}

}  // namespace mialloc
