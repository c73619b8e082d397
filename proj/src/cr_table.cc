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

#include "mialloc/cr_table.h"

#include <charconv>
#include <cmath>

#include "json.hpp"
#include "mialloc/anp.h"
#include "mialloc/baseline_pd.h"
#include "mialloc/cr_pursuit.h"
#include "mialloc/errors.h"
#include "mialloc/report.h"

namespace mialloc {
namespace {

double ParseNumber(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw DomainError("bad number in theta grid: '" + std::string(text) + "'");
  }
  return value;
}

void ParseItem(std::string_view item, std::vector<double>& out) {
  if (const size_t dots = item.find(".."); dots != std::string_view::npos) {
    const double a = ParseNumber(item.substr(0, dots));
    const double b = ParseNumber(item.substr(dots + 2));
    for (int k = 0; a + k <= b + 1e-9; ++k) out.push_back(a + k);
    return;
  }
  if (const size_t c1 = item.find(':'); c1 != std::string_view::npos) {
    const size_t c2 = item.find(':', c1 + 1);
    if (c2 == std::string_view::npos) {
      throw DomainError("theta range needs a:b:step");
    }
    const double a = ParseNumber(item.substr(0, c1));
    const double b = ParseNumber(item.substr(c1 + 1, c2 - c1 - 1));
    const double step = ParseNumber(item.substr(c2 + 1));
    if (!(step > 0.0)) throw DomainError("theta step must be positive");
    for (int k = 0; a + k * step <= b + 1e-9 * step; ++k) {
      out.push_back(a + k * step);
    }
    return;
  }
  out.push_back(ParseNumber(item));
}

}  // namespace

std::vector<double> ParseThetaGrid(std::string_view spec) {
  std::vector<double> out;
  while (!spec.empty()) {
    const size_t comma = spec.find(',');
    ParseItem(spec.substr(0, comma), out);
    if (comma == std::string_view::npos) break;
    spec.remove_prefix(comma + 1);
  }
  if (out.empty()) throw DomainError("empty theta grid");
  for (double theta : out) {
    if (!(theta >= 1.0)) throw DomainError("theta values must be >= 1");
  }
  return out;
}

std::vector<CrTableRow> CrTable(const std::vector<double>& thetas,
                                int num_inventories) {
  if (num_inventories < 1) throw DomainError("N must be >= 1");
  std::vector<CrTableRow> rows;
  for (double theta : thetas) {
    CrTableRow row;
    row.theta = theta;
    row.pi_one = PiOne(theta);
    row.ours = CompetitiveBound(theta, num_inventories);
    row.chi_tilde = Chi(theta).chi_tilde;
    const double slack = 1e-12 * row.chi_tilde;
    row.sandwich = row.pi_one <= row.chi_tilde + slack &&
                   row.chi_tilde <= LargeNRatio(row.pi_one) + slack;
    rows.push_back(row);
  }
  return rows;
}

std::string CrTableCsv(const std::vector<CrTableRow>& rows) {
  std::string out = "theta,pi1,ours,chi_tilde,prior_work\n";
  for (const CrTableRow& r : rows) {
    out += FormatCsvNumber(r.theta) + ',' + FormatCsvNumber(r.pi_one) + ',' +
           FormatCsvNumber(r.ours) + ',' + FormatCsvNumber(r.chi_tilde) +
           ",\n";
  }
  return out;
}

std::string CrTableJson(const std::vector<CrTableRow>& rows,
                        int num_inventories) {
  nlohmann::ordered_json j;
  j["N"] = num_inventories;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const CrTableRow& r : rows) {
    list.push_back({{"theta", r.theta},
                    {"pi1", r.pi_one},
                    {"ours", r.ours},
                    {"chi_tilde", r.chi_tilde},
                    {"sandwich", r.sandwich}});
  }
  j["rows"] = list;
  return j.dump(1) + "\n";
}

}  // namespace mialloc
