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


#include "mialloc/revenue.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mialloc/errors.h"
#include "mialloc/instance.h"

namespace mialloc {
namespace {

std::vector<RevenueFunction> Samples() {
  return {
      RevenueFunction::Linear(2.5, 1.5),
      RevenueFunction::PiecewiseLinear({4.0, 2.0, 1.0}, {0.3, 0.9}, 1.2),
      RevenueFunction::PiecewiseLinear({3.0, 3.0}, {0.5}, 1.0),
      RevenueFunction::ExpSaturation(1.0, 5.0, 0.4, 2.0),
      RevenueFunction::ExpSaturation(2.0, 2.0, 1.0, 1.0),
      RevenueFunction::PriceElastic(6.0, 0.5, 1.0, 2.0),
      RevenueFunction::PriceElastic(3.0, 0.25, 2.0, 1.0),
      RevenueFunction::PriceElastic(3.0, 0.4, 1.5, 1.1),
  };
}

// Brute-force max over a fine grid refined by golden-section search.
double BruteConjugate(const RevenueFunction& g, double lambda) {
  const int n = 4000;
  double best_v = 0.0;
  double best = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double v = g.delta() * k / n;
    const double val = g.Eval(v) - lambda * v;
    if (val > best) {
      best = val;
      best_v = v;
    }
  }
  double lo = std::max(0.0, best_v - g.delta() / n);
  double hi = std::min(g.delta(), best_v + g.delta() / n);
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double m1 = hi - r * (hi - lo);
    const double m2 = lo + r * (hi - lo);
    if (g.Eval(m1) - lambda * m1 < g.Eval(m2) - lambda * m2) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  const double v = 0.5 * (lo + hi);
  return std::max(best, g.Eval(v) - lambda * v);
}

TEST(RevenueTest, ClosedForms) {
  const auto lin = RevenueFunction::Linear(2.0, 3.0);
  EXPECT_DOUBLE_EQ(lin.Eval(1.25), 2.5);

  const auto pl = RevenueFunction::PiecewiseLinear({4.0, 2.0, 1.0}, {0.3, 0.9}, 1.2);
  EXPECT_NEAR(pl.Eval(0.3), 1.2, 1e-15);
  EXPECT_NEAR(pl.Eval(0.9), 1.2 + 1.2, 1e-15);
  EXPECT_NEAR(pl.Eval(1.2), 2.4 + 0.3, 1e-15);

  const auto ex = RevenueFunction::ExpSaturation(1.0, 5.0, 0.4, 2.0);
  const double v = 0.7;
  EXPECT_NEAR(ex.Eval(v), v + 4.0 * 0.4 * (1.0 - std::exp(-v / 0.4)), 1e-14);
  EXPECT_NEAR(ex.Derivative(v), 1.0 + 4.0 * std::exp(-v / 0.4), 1e-14);

  const auto pe = RevenueFunction::PriceElastic(3.0, 0.25, 2.0, 1.0);
  EXPECT_NEAR(pe.Eval(0.8), (3.0 - 0.25 * 0.64) * 0.8, 1e-15);
  EXPECT_NEAR(pe.Derivative(0.8), 3.0 - 3.0 * 0.25 * 0.64, 1e-14);
}

TEST(RevenueTest, PriceElasticClipsDeltaToArgmax) {
  // argmax of (2 - v) v is 1.
  const auto pe = RevenueFunction::PriceElastic(2.0, 1.0, 1.0, 3.0);
  EXPECT_TRUE(pe.delta_clipped());
  EXPECT_NEAR(pe.delta(), 1.0, 1e-15);
  const auto ok = RevenueFunction::PriceElastic(2.0, 1.0, 1.0, 0.5);
  EXPECT_FALSE(ok.delta_clipped());
}

TEST(RevenueTest, InverseEvalRoundTrip) {
  for (const RevenueFunction& g : Samples()) {
    for (int k = 0; k <= 50; ++k) {
      const double v = g.delta() * k / 50.0;
      const double back = g.InverseEval(g.Eval(v));
      EXPECT_NEAR(g.Eval(back), g.Eval(v), 1e-10);
      if (g.MinSlope() > 0.0) {
        EXPECT_NEAR(back, v, 1e-10 / g.MinSlope());
      }
    }
  }
}

TEST(RevenueTest, InverseEvalAboveRangeThrows) {
  const auto g = RevenueFunction::Linear(1.0, 1.0);
  EXPECT_THROW(g.InverseEval(1.5), InfeasibleTargetError);
  EXPECT_NEAR(g.InverseEval(1.0 + 1e-12), 1.0, 1e-15);
}

TEST(RevenueTest, SampledConcavity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const RevenueFunction& g : Samples()) {
    EXPECT_EQ(CheckConcavity(g, 1000, 1e-9), "");
    for (int k = 0; k < 500; ++k) {
      double v[3] = {u(rng), u(rng), u(rng)};
      std::sort(v, v + 3);
      for (double& x : v) x *= g.delta();
      if (v[1] - v[0] < 1e-6 || v[2] - v[1] < 1e-6) continue;
      const double s1 = (g.Eval(v[1]) - g.Eval(v[0])) / (v[1] - v[0]);
      const double s2 = (g.Eval(v[2]) - g.Eval(v[1])) / (v[2] - v[1]);
      EXPECT_GE(s1, s2 - 1e-8);
    }
  }
}

TEST(RevenueTest, GradientBoundsOnSamples) {
  const auto g = RevenueFunction::ExpSaturation(1.0, 4.0, 0.3, 1.0);
  EXPECT_EQ(CheckGradientBounds(g, 1.0, 4.0, 1000, 1e-12), "");
  EXPECT_NE(CheckGradientBounds(g, 1.5, 4.0, 1000, 1e-12), "");
  EXPECT_NE(CheckGradientBounds(g, 1.0, 3.0, 1000, 1e-12), "");
}

TEST(RevenueTest, ConjugateMatchesBruteForce) {
  for (const RevenueFunction& g : Samples()) {
    for (double lambda : {0.0, 0.5, 1.0, 1.7, 2.5, 3.0, 4.5, 10.0}) {
      EXPECT_NEAR(g.Conjugate(lambda), BruteConjugate(g, lambda), 1e-9)
          << KindName(g.kind()) << " lambda=" << lambda;
    }
  }
}

TEST(RevenueTest, DemandAttainsConjugate) {
  for (const RevenueFunction& g : Samples()) {
    for (double lambda : {0.0, 1.0, 2.0, 3.0, 4.0, 6.0}) {
      const Demand d = g.DemandAt(lambda);
      ASSERT_LE(d.lo, d.hi);
      EXPECT_NEAR(g.Eval(d.lo) - lambda * d.lo, g.Conjugate(lambda), 1e-10);
      EXPECT_NEAR(g.Eval(d.hi) - lambda * d.hi, g.Conjugate(lambda), 1e-10);
    }
  }
  // A linear stretch at the price gives the whole stretch.
  const auto pl = RevenueFunction::PiecewiseLinear({4.0, 2.0}, {0.5}, 1.0);
  const Demand d = pl.DemandAt(2.0);
  EXPECT_DOUBLE_EQ(d.lo, 0.5);
  EXPECT_DOUBLE_EQ(d.hi, 1.0);
}

TEST(RevenueTest, SupergradientAtKink) {
  const auto pl = RevenueFunction::PiecewiseLinear({4.0, 2.0}, {0.5}, 1.0);
  const Supergradient s = pl.SupergradientAt(0.5);
  EXPECT_DOUBLE_EQ(s.left, 4.0);
  EXPECT_DOUBLE_EQ(s.right, 2.0);
  const Supergradient z = pl.SupergradientAt(0.0);
  EXPECT_DOUBLE_EQ(z.left, 4.0);
  EXPECT_DOUBLE_EQ(z.right, 4.0);
}

TEST(RevenueTest, ScaledKeepsFamilyAndIdentity) {
  const double pi = 2.5;
  for (const RevenueFunction& g : Samples()) {
    const RevenueFunction s = g.Scaled(pi);
    EXPECT_EQ(s.kind(), g.kind());
    EXPECT_NEAR(s.delta(), pi * g.delta(), 1e-12);
    for (int k = 0; k <= 10; ++k) {
      const double v = s.delta() * k / 10.0;
      EXPECT_NEAR(s.Eval(v), pi * g.Eval(v / pi), 1e-12);
    }
  }
}

TEST(RevenueTest, RateLimitRestrictsDomain) {
  const auto g = RevenueFunction::Linear(3.0, 2.0);
  const auto h = g.WithRateLimit(0.5);
  EXPECT_DOUBLE_EQ(h.delta(), 0.5);
  EXPECT_DOUBLE_EQ(h.Conjugate(1.0), 1.0);
  EXPECT_THROW(h.Eval(0.75), DomainError);
}

TEST(RevenueTest, RejectsNonConcavePieces) {
  EXPECT_THROW(RevenueFunction::PiecewiseLinear({1.0, 2.0}, {0.5}, 1.0),
               InvalidInstanceError);
  EXPECT_THROW(RevenueFunction::Linear(1.0, -1.0), InvalidInstanceError);
}

}  // namespace
}  // namespace mialloc
