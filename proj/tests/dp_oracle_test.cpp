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

#include <chrono>
#include <cmath>

#include <gtest/gtest.h>

#include "topp_ni/config.hpp"
#include "topp_ni/demo.hpp"
#include "topp_ni/dp_oracle.hpp"
#include "topp_ni/planner.hpp"

namespace topp_ni {
namespace {

ConstraintProfile straight() {
  return unicycle_constraints(PathSpec::line(5.0), {0.5, 1.3}, {0.05, 0.1});
}

std::optional<double> dp(const ConstraintProfile& cp, std::size_t n) {
  const auto lim = compute_limit_curves(cp, 1000);
  DpOptions opt;
  opt.n_s = n;
  opt.n_z = n;
  return dp_min_time(cp, lim, 0.0, 0.0, opt);
}

TEST(DpOracle, StageReachFromRows) {
  // sdd <= 1 - z  and  -sdd <= 1 - z, with ds = 0.5 and z = 0.2.
  const std::vector<AccelRow> rows{{1.0, 1.0, -1.0}, {-1.0, 1.0, -1.0}};
  const auto r = detail::stage_reach(rows, 0.2, 0.5);
  // (z'-z)/1 + (z+z')/2 <= 1  ->  z' <= (1 + 0.2 - 0.1) / 1.5
  EXPECT_NEAR(r.hi, 1.1 / 1.5, 1e-15);
  // -(z'-z)/1 + (z+z')/2 <= 1  ->  z' >= (0.2 + 0.1 - 1) / 0.5
  EXPECT_NEAR(r.lo, -0.7 / 0.5, 1e-15);
  EXPECT_EQ(r.violation, -kInfinity);
}

TEST(DpOracle, StageReachFlagsRowsWithoutAcceleration) {
  const std::vector<AccelRow> rows{{0.0, 0.0, 0.5}};
  const auto r = detail::stage_reach(rows, 0.1, 0.5);
  EXPECT_GT(r.violation, 0.0);
}

TEST(DpOracle, StraightPathMatchesClosedForm) {
  const auto t = dp(straight(), 256);
  ASSERT_TRUE(t.has_value());
  EXPECT_NEAR(*t, 2.0 * std::sqrt(50.0), 0.05 * 2.0 * std::sqrt(50.0));
}

TEST(DpOracle, DemoCase1MatchesPlanner) {
  const auto cp = demo::constraints(1);
  const auto lim = compute_limit_curves(cp, 1000);
  const double ni = ni_plan(cp, lim, 0.0, 0.0).traversal_time;
  const auto t = dp(cp, 256);
  ASSERT_TRUE(t.has_value());
  EXPECT_NEAR(*t, ni, 0.05 * ni);
  // A discretized optimum over a restricted class cannot beat the true one
  // by more than its resolution.
  EXPECT_GT(*t, ni * (1 - 0.01));
}

TEST(DpOracle, ConvergesUnderRefinement) {
  const auto cp = straight();
  const double exact = 2.0 * std::sqrt(50.0);
  const double e1 = std::abs(*dp(cp, 64) - exact);
  const double e2 = std::abs(*dp(cp, 256) - exact);
  EXPECT_LT(e2, e1);
}

TEST(DpOracle, UnreachableWhenTheHillStallsEverything) {
  const auto cp = build_constraints(load_config(TOPP_NI_CONFIGS "/hill.json"));
  EXPECT_FALSE(dp(cp, 128).has_value());
}

TEST(DpOracle, RejectsTinyGrids) {
  const auto cp = straight();
  const auto lim = compute_limit_curves(cp, 100);
  DpOptions opt;
  opt.n_s = 16;
  EXPECT_THROW(dp_min_time(cp, lim, 0.0, 0.0, opt), Error);
}

// NI gives up on this instance, yet a feasible phase-plane trajectory exists.
TEST(DpOracle, DemoCase2IsReachable) {
  const auto t = dp(demo::constraints(2), 256);
  ASSERT_TRUE(t.has_value());
  EXPECT_GT(*t, 0.0);
}

}  // namespace
}  // namespace topp_ni
