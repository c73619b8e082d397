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

#include "mialloc/generators.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mialloc/errors.h"

namespace mialloc {
namespace {

// Platform-independent uniform draws (std::uniform_real_distribution is not
// specified bit-for-bit across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  int Index(int n) { return static_cast<int>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

RevenueFunction RandomGradientBounded(Rng& rng, double theta, double delta) {
  switch (rng.Index(3)) {
    case 0:
      return RevenueFunction::Linear(std::pow(theta, rng.Uniform()), delta);
    case 1: {
      const int segments = 2 + rng.Index(2);
      std::vector<double> slopes(segments);
      for (double& s : slopes) s = std::pow(theta, rng.Uniform());
      std::sort(slopes.rbegin(), slopes.rend());
      std::vector<double> breaks(segments - 1);
      for (double& b : breaks) b = delta * rng.Uniform(0.05, 0.95);
      std::sort(breaks.begin(), breaks.end());
      breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
      slopes.resize(breaks.size() + 1);
      return RevenueFunction::PiecewiseLinear(std::move(slopes),
                                              std::move(breaks), delta);
    }
    default: {
      double lo = rng.Uniform();
      double hi = rng.Uniform();
      if (lo > hi) std::swap(lo, hi);
      const double scale = std::max(delta, 1e-3) * rng.Uniform(0.2, 1.0);
      return RevenueFunction::ExpSaturation(std::pow(theta, lo),
                                            std::pow(theta, hi), scale, delta);
    }
  }
}

RevenueFunction RandomPriceElastic(Rng& rng, double theta, double delta) {
  static constexpr double kExponents[] = {1.0, 1.5, 2.0};
  const double price = std::pow(theta, rng.Uniform());
  const double k = kExponents[rng.Index(3)];
  // Keep the revenue-maximizing quantity at or beyond delta.
  const double coef = rng.Uniform(0.2, 1.0) * price /
                      ((k + 1.0) * std::pow(std::max(delta, 1e-3), k));
  return RevenueFunction::PriceElastic(price, coef, k, delta);
}

}  // namespace

Instance GenStaircase(double theta, int num_slots, double capacity,
                      int num_inventories) {
  if (!(theta >= 1.0)) throw DomainError("theta must be >= 1");
  if (num_slots < 1 || num_inventories < 1) {
    throw DomainError("need T >= 1 and N >= 1");
  }
  if (!(capacity > 0.0)) throw DomainError("capacity must be positive");
  std::vector<std::vector<RevenueFunction>> slots;
  for (int t = 1; t <= num_slots; ++t) {
    const double slope =
        std::pow(theta, static_cast<double>(t) / num_slots);
    slots.emplace_back(num_inventories,
                       RevenueFunction::Linear(slope, capacity));
  }
  return Instance(std::vector<double>(num_inventories, capacity),
                  std::vector<double>(num_slots, capacity), std::move(slots),
                  1.0, theta, RevenueClass::kGradientBounded);
}

Instance GenRandom(std::uint64_t seed, int num_inventories, int num_slots,
                   double theta, RevenueClass revenue_class) {
  if (!(theta >= 1.0)) throw DomainError("theta must be >= 1");
  if (num_slots < 1 || num_inventories < 1) {
    throw DomainError("need T >= 1 and N >= 1");
  }
  Rng rng(seed);
  std::vector<double> allowance(num_slots);
  std::vector<std::vector<RevenueFunction>> slots(num_slots);
  std::vector<double> rate_total(num_inventories, 0.0);
  for (int t = 0; t < num_slots; ++t) {
    allowance[t] = rng.Uniform(0.5, 1.5);
    for (int i = 0; i < num_inventories; ++i) {
      const double delta = allowance[t] * rng.Uniform(0.3, 1.0);
      rate_total[i] += delta;
      slots[t].push_back(revenue_class == RevenueClass::kPriceElastic
                             ? RandomPriceElastic(rng, theta, delta)
                             : RandomGradientBounded(rng, theta, delta));
    }
  }
  std::vector<double> capacity(num_inventories);
  for (int i = 0; i < num_inventories; ++i) {
    capacity[i] = rate_total[i] * rng.Uniform(0.3, 0.8);
  }
  return Instance(std::move(capacity), std::move(allowance), std::move(slots),
                  1.0, theta, revenue_class);
}

}  // namespace mialloc
