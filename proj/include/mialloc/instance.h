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

#ifndef MIALLOC_INSTANCE_H_
#define MIALLOC_INSTANCE_H_

#include <string>
#include <string_view>
#include <vector>

#include "mialloc/revenue.h"

namespace mialloc {

// Revenue-function class shared by every slot of an instance.
enum class RevenueClass {
  // g'(v) in [p_min, p_max] on [0, delta].
  kGradientBounded,
  // g(v) = (p - q(v)) v with q convex increasing, q(0) = 0, p in [p_min, p_max].
  kPriceElastic,
};

std::string_view ClassName(RevenueClass c);
RevenueClass ParseClass(std::string_view name);

// Row-per-slot matrix: values[t][i].
using SlotMatrix = std::vector<std::vector<double>>;

SlotMatrix ZeroMatrix(int num_slots, int num_inventories);

// A complete input: horizon, capacities, per-slot allowances and the T x N
// revenue functions (each carrying its own rate limit).
class Instance {
 public:
  // revenue[t][i]. Throws InvalidInstanceError on any violated invariant.
  Instance(std::vector<double> capacity, std::vector<double> allowance,
           std::vector<std::vector<RevenueFunction>> revenue, double p_min,
           double p_max, RevenueClass revenue_class);

  int num_slots() const { return static_cast<int>(allowance_.size()); }
  int num_inventories() const { return static_cast<int>(capacity_.size()); }
  const std::vector<double>& capacity() const { return capacity_; }
  const std::vector<double>& allowance() const { return allowance_; }
  double capacity(int i) const { return capacity_[i]; }
  double allowance(int t) const { return allowance_[t]; }
  const RevenueFunction& revenue(int t, int i) const { return revenue_[t][i]; }
  const std::vector<RevenueFunction>& slot(int t) const { return revenue_[t]; }
  double p_min() const { return p_min_; }
  double p_max() const { return p_max_; }
  double theta() const { return p_max_ / p_min_; }
  RevenueClass revenue_class() const { return revenue_class_; }

  // Revenue functions of inventory i over slots [0, upto).
  std::vector<RevenueFunction> InventoryHistory(int i, int upto) const;
  // The first `upto` slots as an instance of its own.
  Instance Prefix(int upto) const;

  bool operator==(const Instance& other) const;

 private:
  std::vector<double> capacity_;
  std::vector<double> allowance_;
  std::vector<std::vector<RevenueFunction>> revenue_;
  double p_min_;
  double p_max_;
  RevenueClass revenue_class_;
};

// Sampled class-membership checks for one function. Empty string on success,
// otherwise a description of the first violation.
std::string CheckConcavity(const RevenueFunction& g, int samples, double tol);
std::string CheckGradientBounds(const RevenueFunction& g, double p_min,
                                double p_max, int samples, double tol);
std::string CheckClassMembership(const RevenueFunction& g, RevenueClass c,
                                 double p_min, double p_max);

struct FeasibilityReport {
  double max_capacity_violation = 0.0;
  double max_allowance_violation = 0.0;
  double max_rate_violation = 0.0;
  double min_value = 0.0;
  bool capacity_ok = true;
  bool allowance_ok = true;
  bool rate_ok = true;

  bool ok() const { return capacity_ok && allowance_ok && rate_ok; }
};

// Online or offline decisions for an instance.
struct Allocation {
  SlotMatrix v;  // v[t][i]
  SlotMatrix a;  // allowance splits, zero when unused
  double objective = 0.0;
};

FeasibilityReport CheckFeasibility(const Instance& instance,
                                   const SlotMatrix& v, double tol);
double Objective(const Instance& instance, const SlotMatrix& v);

}  // namespace mialloc

#endif  // MIALLOC_INSTANCE_H_
