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


#include "mialloc/baseline_pd.h"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mialloc/anp.h"
#include "mialloc/cr_pursuit.h"
#include "mialloc/errors.h"
#include "mialloc/generators.h"
#include "mialloc/instance.h"

namespace mialloc {
namespace {

const double kE = std::exp(1.0);

// χ from its defining equation y e^y = L e^{L-1}, y = χ + L - 1, by
// bisection on y.
double ChiOracle(double theta) {
  const double l = std::log(theta);
  const double target = l * std::exp(l - 1.0);
  double lo = 0.0, hi = std::max(1.0, l + 1.0);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi) - l + 1.0;
}

TEST(LambertWTest, KnownValues) {
  EXPECT_NEAR(LambertW(1.0), 0.56714329040978387, 1e-15);  // omega constant
  EXPECT_NEAR(LambertW(kE), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(LambertW(0.0), 0.0);
  EXPECT_THROW(LambertW(-0.1), DomainError);
}

TEST(LambertWTest, InvertsProductLog) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = std::pow(10.0, u(rng));
    const double w = LambertW(x);
    EXPECT_NEAR(w * std::exp(w), x, 1e-13 * x);
  }
}

TEST(ChiTest, MatchesOracleAndAnchors) {
  const ChiValues one = Chi(1.0);
  EXPECT_NEAR(one.chi, 1.0, 1e-9);
  EXPECT_NEAR(one.chi_tilde, kE / (kE - 1.0), 1e-9);
  for (double theta : {1.0001, 1.5, 2.0, 5.0, 10.0, 20.0, 40.0, 60.0, 1e4}) {
    const ChiValues c = Chi(theta);
    EXPECT_NEAR(c.chi, ChiOracle(theta), 1e-12) << theta;
    EXPECT_GT(c.chi, 0.0);
    EXPECT_LE(c.chi, 1.0);
    EXPECT_NEAR(c.chi_tilde, 1.0 / (1.0 - std::exp(-c.chi)), 1e-12);
    // The exponent of the upper branch equals χ̃.
    EXPECT_NEAR(std::log(theta) / (1.0 - c.chi), c.chi_tilde, 1e-9 * c.chi_tilde);
  }
}

TEST(ChiTest, RatioSandwich) {
  for (double theta : {1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 60.0}) {
    const double pi = PiOne(theta);
    const double chi_tilde = Chi(theta).chi_tilde;
    EXPECT_LE(pi, chi_tilde + 1e-12) << theta;
    EXPECT_LE(chi_tilde, LargeNRatio(pi) + 1e-12) << theta;
  }
}

TEST(ThresholdTest, EndpointsAndContinuity) {
  for (double theta : {1.0, 3.0, 60.0}) {
    for (double C : {0.5, 1.0, 4.0}) {
      const double p_min = 1.5;
      const Threshold phi(p_min, p_min * theta, C);
      EXPECT_NEAR(phi(0.0), 0.0, 1e-15);
      EXPECT_NEAR(phi(phi.split()), p_min, 1e-12 * p_min);
      EXPECT_NEAR(phi(C), p_min * theta, 1e-12 * p_min * theta);
      double prev = -1.0;
      for (int k = 0; k <= 1000; ++k) {
        const double w = C * k / 1000.0;
        EXPECT_GE(phi(w), prev);
        prev = phi(w);
      }
    }
  }
}

TEST(ThresholdTest, DualFittingConditionsOnGrid) {
  for (double theta : {1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 60.0}) {
    for (double C : {0.3, 1.0, 7.0}) {
      const double p_min = 1.0;
      const double p_max = theta;
      const Threshold phi(p_min, p_max, C);
      const double h = C * 1e-6;
      const double tol = 1e-6 * p_max;
      const double chi_tilde = phi.chi_tilde();
      for (int k = 1; k < 1000; ++k) {
        const double w = C * k / 1000.0;
        if (std::abs(w - phi.split()) <= 2.0 * h || w + h > C) continue;
        const double d = (phi(w + h) - phi(w - h)) / (2.0 * h);
        if (w < phi.split()) {
          EXPECT_LE(C * d - phi(w), p_min * (chi_tilde - 1.0) + tol);
        } else {
          EXPECT_LE(C * d - chi_tilde * phi(w), tol);
        }
      }
    }
  }
}

TEST(PdStepTest, StopsWhereThresholdMeetsSlope) {
  // One inventory, one linear slot with slope 2 on [1, 4], C = 1: the
  // allocation w solves φ(w) = 2 on the upper branch.
  const Threshold phi(1.0, 4.0, 1.0);
  std::vector<double> used = {0.0};
  const auto v = PdStep({phi}, used, {RevenueFunction::Linear(2.0, 1.0)}, 1.0);
  ASSERT_EQ(v.size(), 1u);
  const double chi = phi.chi();
  const double want = chi + (1.0 - chi) * std::log(2.0) / std::log(4.0);
  EXPECT_NEAR(v[0], want, 1e-9);
  EXPECT_DOUBLE_EQ(used[0], v[0]);
}

TEST(PdStepTest, RespectsAllowanceAndCapacity) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    std::vector<Threshold> th;
    std::vector<double> used(n, 0.0);
    std::vector<RevenueFunction> slot;
    for (int i = 0; i < n; ++i) {
      th.emplace_back(1.0, 8.0, 0.5 + u(rng));
      used[i] = th.back().capacity() * u(rng);
      slot.push_back(RevenueFunction::Linear(1.0 + 7.0 * u(rng), 0.2 + u(rng)));
    }
    const double allowance = 2.0 * u(rng);
    const std::vector<double> before = used;
    const auto v = PdStep(th, used, slot, allowance);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      EXPECT_GE(v[i], 0.0);
      EXPECT_LE(v[i], slot[i].delta() + 1e-12);
      EXPECT_LE(used[i], th[i].capacity() + 1e-8);
      EXPECT_NEAR(used[i], before[i] + v[i], 1e-12);
      total += v[i];
    }
    EXPECT_LE(total, allowance + 1e-8);
  }
}

TEST(RunPrimalDualTest, RatioWithinChiTilde) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (double theta : {1.0, 4.0, 30.0}) {
      const Instance inst =
          GenRandom(seed, 3, 8, theta, RevenueClass::kGradientBounded);
      const RunReport r = RunPrimalDual(inst);
      EXPECT_TRUE(r.ok());
      EXPECT_TRUE(r.bound_holds);
      EXPECT_NEAR(r.bound, Chi(theta).chi_tilde, 1e-15);
      EXPECT_TRUE(CheckFeasibility(inst, r.allocation.v, 1e-8).ok());
    }
  }
  EXPECT_THROW(RunPrimalDual(GenRandom(1, 2, 3, 2.0, RevenueClass::kPriceElastic)),
               DomainError);
}

}  // namespace
}  // namespace mialloc
