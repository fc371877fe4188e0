// Copyright 2026 The topp-ni Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "topp_ni/demo.hpp"
#include "topp_ni/limit_curves.hpp"

namespace topp_ni {
namespace {

TEST(LimitCurves, StraightPath) {
  const auto cp = unicycle_constraints(PathSpec::line(5), {0.5, 1.3}, {0.05, 0.1});
  const auto lim = compute_limit_curves(cp, 200);
  for (std::size_t i = 0; i < lim.grid().size(); ++i) {
    EXPECT_TRUE(std::isinf(lim.mvc()[i]));
    EXPECT_EQ(lim.mvc_star()[i], 1.3);
    EXPECT_TRUE(lim.dagger_flags()[i]);
  }
  ASSERT_EQ(lim.dagger_segments().size(), 1u);
  EXPECT_EQ(lim.dagger_segments()[0].begin, 0.0);
  EXPECT_EQ(lim.dagger_segments()[0].end, 5.0);
}

TEST(LimitCurves, DemoCasesHaveTwoPockets) {
  for (int c : {1, 2}) {
    const auto lim = compute_limit_curves(demo::constraints(c), 1000);
    ASSERT_EQ(lim.dagger_segments().size(), 2u) << "case " << c;
    const double se = lim.length();
    EXPECT_LT(lim.dagger_segments()[0].end, se / 2);
    EXPECT_GT(lim.dagger_segments()[1].begin, se / 2);
  }
  // Lower omega bound widens both pockets.
  const auto a = compute_limit_curves(demo::constraints(1), 1000).dagger_segments();
  const auto b = compute_limit_curves(demo::constraints(2), 1000).dagger_segments();
  for (int k : {0, 1}) {
    EXPECT_LT(b[k].begin, a[k].begin);
    EXPECT_GT(b[k].end, a[k].end);
  }
}

TEST(LimitCurves, ClosedFormMatchesBisection) {
  const auto spec = demo::path();
  const auto cp = demo::constraints(1);
  std::mt19937_64 rng(oracle::base_seed());
  std::uniform_real_distribution<double> u(0.0, spec.length());
  for (int n = 0; n < 50; ++n) {
    const double s = u(rng);
    const auto k = spec.at(s);
    const oracle::UnicycleRows ref{k.kappa, k.kappa_s, {0.5, 1.3}, {0.05, 0.1}};
    const double expected = oracle::mvc_by_bisection(
        [&](double v) { return ref.alpha(v); }, [&](double v) { return ref.beta(v); });
    EXPECT_NEAR(max_velocity(cp, s), expected, 1e-6) << "s=" << s;
  }
}

TEST(LimitCurves, PointwiseInvariants) {
  for (int c : {1, 2}) {
    const auto cp = demo::constraints(c);
    const auto lim = compute_limit_curves(cp, 1000);
    const auto g = lim.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double mvc = lim.mvc()[i];
      const double star = lim.mvc_star()[i];
      EXPECT_EQ(star, std::min(mvc, lim.vlim()[i]));
      EXPECT_DOUBLE_EQ(lim.vlim()[i], velocity_limit(cp, g[i]));
      if (lim.dagger_flags()[i]) {
        EXPECT_LT(star, mvc);
      }
      if (std::isfinite(mvc)) {
        const auto b = accel_bounds(cp, g[i], mvc);
        EXPECT_LE(std::abs(b.alpha - b.beta), 1e-6 * std::max(1.0, std::abs(b.beta)));
      }
      for (double f : {0.0, 0.5, 0.99}) {
        const auto b = accel_bounds(cp, g[i], f * star);
        EXPECT_LT(b.alpha, b.beta) << "s=" << g[i] << " f=" << f;
      }
    }
    for (const auto& seg : lim.dagger_segments()) {
      for (double f : {0.05, 0.5, 0.95}) {
        const double s = seg.begin + f * seg.length();
        EXPECT_LT(lim.mvc_star_at(s), lim.mvc_at(s));
      }
    }
  }
}

TEST(LimitCurves, Errors) {
  const auto cp = unicycle_constraints(PathSpec::line(1), {0.5, 1.3}, {0.05, 0.1});
  EXPECT_THROW(compute_limit_curves(cp, 15), Error);
  // Rows that cannot hold at rest.
  const auto stuck = tabulated_constraints(
      {0.0, 1.0}, {{{1, 0, 0.1}, {-1, 0, 0.2}}, {{1, 0, 0.1}, {-1, 0, 0.2}}});
  EXPECT_THROW(compute_limit_curves(stuck, 32), Error);
}

}  // namespace
}  // namespace topp_ni
