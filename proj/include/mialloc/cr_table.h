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

#ifndef MIALLOC_CR_TABLE_H_
#define MIALLOC_CR_TABLE_H_

#include <string>
#include <string_view>
#include <vector>

namespace mialloc {

struct CrTableRow {
  double theta = 1.0;
  double pi_one = 1.0;
  double ours = 0.0;       // π₁ if π₁ >= N, else e^{1/π₁} / (e^{1/π₁} - 1)
  double chi_tilde = 0.0;  // threshold baseline
  bool sandwich = true;    // π₁ <= χ̃ <= e^{1/π₁} / (e^{1/π₁} - 1)
};

// Accepts "a..b" (integers a to b), "a:b:step" and comma-separated lists of
// either form. Throws DomainError on malformed input or values below 1.
std::vector<double> ParseThetaGrid(std::string_view spec);

std::vector<CrTableRow> CrTable(const std::vector<double>& thetas,
                                int num_inventories);

// Columns theta,pi1,ours,chi_tilde,prior_work; the last column is left
// empty. 12 significant digits, LF line endings.
std::string CrTableCsv(const std::vector<CrTableRow>& rows);
std::string CrTableJson(const std::vector<CrTableRow>& rows,
                        int num_inventories);

}  // namespace mialloc

#endif  // MIALLOC_CR_TABLE_H_
