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

#ifndef MIALLOC_GENERATORS_H_
#define MIALLOC_GENERATORS_H_

#include <cstdint>

#include "mialloc/instance.h"

namespace mialloc {

// Linear slopes θ^{t/T} for t = 1..T with p_min = 1, p_max = θ. Every
// inventory has capacity C and every slot has δ = A = C, so later and better
// slots compete for the same capacity. Throws DomainError for θ < 1.
Instance GenStaircase(double theta, int num_slots, double capacity,
                      int num_inventories = 1);

// Reproducible pseudo-random instance with p_min = 1 and p_max = θ.
// Gradient-bounded instances mix linear, piecewise-linear and
// exponential-saturation functions; price-elastic instances use
// (p - c v^k) v with k in {1, 1.5, 2}. Capacities are set below the total
// rate limit of each inventory so that they bind.
Instance GenRandom(std::uint64_t seed, int num_inventories, int num_slots,
                   double theta, RevenueClass revenue_class);

}  // namespace mialloc

#endif  // MIALLOC_GENERATORS_H_
