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

// Command-line front end: run, suite, table and gen.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mialloc/cr_table.h"
#include "mialloc/errors.h"
#include "mialloc/generators.h"
#include "mialloc/instance_io.h"
#include "mialloc/report.h"
#include "mialloc/suite.h"

namespace {

void Emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mialloc::Error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online multi-inventory allocation: algorithms and benchmark"};
  app.require_subcommand(1);

  std::string out_path;
  std::string format = "json";
  double tol = 0.0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Output file (default stdout)");
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--tol", tol, "Relative duality-gap tolerance");
  };

  CLI::App* run = app.add_subcommand("run", "Run one algorithm on one instance");
  std::string instance_path;
  std::string algorithm = "anp";
  double pi = 0.0;
  run->add_option("instance", instance_path, "Instance file")->required();
  run->add_option("--algorithm,-a", algorithm,
                  "cr_pursuit | anp | anp_small | anp_large | primal_dual");
  run->add_option("--pi", pi, "Override the pursuit parameter");
  add_common(run);

  CLI::App* suite = app.add_subcommand("suite", "Run a benchmark suite");
  std::string config_path;
  int jobs = 0;
  double grid_step = 0.0;
  suite->add_option("config", config_path, "Suite config file")->required();
  suite->add_option("--jobs,-j", jobs, "Worker threads");
  suite->add_option("--grid-step", grid_step, "Grid oracle step");
  add_common(suite);

  CLI::App* table = app.add_subcommand("table", "Competitive-ratio table");
  int table_n = 3;
  std::string theta_spec = "1..60";
  table->add_option("--N", table_n, "Number of inventories");
  table->add_option("--theta", theta_spec, "Grid: a..b, a:b:step or list");
  add_common(table);

  CLI::App* gen = app.add_subcommand("gen", "Write a generated instance");
  std::string generator = "random";
  std::uint64_t seed = 1;
  int gen_n = 1;
  int gen_t = 4;
  double theta = 2.0;
  double capacity = 1.0;
  std::string cls = "gradient_bounded";
  gen->add_option("--generator,-g", generator)
      ->check(CLI::IsMember({"random", "staircase"}));
  gen->add_option("--seed", seed);
  gen->add_option("--N", gen_n);
  gen->add_option("--T", gen_t);
  gen->add_option("--theta", theta);
  gen->add_option("--C", capacity, "Staircase capacity");
  gen->add_option("--class", cls)
      ->check(CLI::IsMember({"gradient_bounded", "price_elastic"}));
  gen->add_option("--out", out_path, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      mialloc::Tolerances t;
      if (tol > 0.0) t.gap_rel = tol;
      const mialloc::Instance inst = mialloc::ReadInstanceFile(instance_path);
      const mialloc::RunReport report =
          mialloc::RunAlgorithm(algorithm, inst, pi, t);
      if (format == "csv") {
        Emit(mialloc::ReportCsvHeader() + "\n" + mialloc::ReportCsvRow(report) +
                 "\n",
             out_path);
      } else {
        Emit(mialloc::ReportToJson(report, true).dump(1) + "\n", out_path);
      }
      return report.ok() ? 0 : 1;
    }
    if (*suite) {
      std::ifstream in(config_path);
      if (!in) throw mialloc::Error("cannot read " + config_path);
      const nlohmann::json config = nlohmann::json::parse(in);
      mialloc::SuiteOptions options;
      options.jobs = jobs;
      options.grid_step = grid_step;
      options.gap_rel = tol;
      const mialloc::SuiteReport report = mialloc::RunSuite(config, options);
      if (format == "csv") {
        Emit(mialloc::SuiteToCsv(report), out_path);
      } else {
        Emit(mialloc::SuiteToJson(report).dump(1) + "\n", out_path);
      }
      for (const auto& [alg, worst] : report.worst_ratio) {
        std::cerr << alg << ": worst ratio " << worst << ", tightness "
                  << report.worst_tightness.at(alg) << "\n";
      }
      std::cerr << report.runs.size() << " runs, " << report.bound_violations
                << " bound violations, " << report.check_failures
                << " failed checks, " << report.errors.size() << " errors\n";
      return report.ExitCode();
    }
    if (*table) {
      const auto rows =
          mialloc::CrTable(mialloc::ParseThetaGrid(theta_spec), table_n);
      Emit(format == "csv" ? mialloc::CrTableCsv(rows)
                           : mialloc::CrTableJson(rows, table_n),
           out_path);
      for (const auto& row : rows) {
        if (!row.sandwich) return 1;
      }
      return 0;
    }
    if (*gen) {
      const mialloc::Instance inst =
          generator == "staircase"
              ? mialloc::GenStaircase(theta, gen_t, capacity, gen_n)
              : mialloc::GenRandom(seed, gen_n, gen_t, theta,
                                   mialloc::ParseClass(cls));
      Emit(mialloc::SerializeInstance(inst), out_path);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
