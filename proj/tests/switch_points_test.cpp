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

#include <gtest/gtest.h>

#include "topp_ni/constraints.hpp"
#include "topp_ni/demo.hpp"
#include "topp_ni/limit_curves.hpp"
#include "topp_ni/phase_profile.hpp"
#include "topp_ni/switch_points.hpp"

namespace topp_ni {
namespace {

// MVC sqrt(a(s)) with a stepping down from 0.6 to 0.3 at s = 1.
ConstraintProfile step_down() {
  auto rows = [](double a) {
    return std::vector<AccelRow>{{1.0, 1.0, -a}, {-1.0, 1.0, -a}};
  };
  return tabulated_constraints({0.0, 1.0, 1.0 + 1e-12, 2.0},
                               {rows(0.6), rows(0.6), rows(0.3), rows(0.3)});
}

TEST(SwitchPoints, StraightPathHasNone) {
  const auto cp =
      unicycle_constraints(PathSpec::line(5.0), {0.5, 1.3}, {0.05, 0.1});
  const auto lim = compute_limit_curves(cp, 500);
  EXPECT_FALSE(find_next_switch(cp, lim, 0.0).has_value());
  EXPECT_TRUE(all_switch_points(cp, lim).empty());
}

TEST(SwitchPoints, DemoCase1NextAfterFirstBeta) {
  const auto cp = demo::constraints(1);
  const auto lim = compute_limit_curves(cp, 1000);
  const auto b = integrate_beta(cp, lim, {0.0, 0.0});
  ASSERT_EQ(b.termination, Termination::hit_mvc_star);
  const auto sp = find_next_switch(cp, lim, b.end());
  ASSERT_TRUE(sp.has_value());
  EXPECT_EQ(sp->type, SwitchType::zero_inertia);
  EXPECT_NEAR(sp->location.s, 3.986, 2e-3);
  EXPECT_LE(sp->location.sdot, lim.mvc_star_at(sp->location.s) * (1 + 1e-9));
  EXPECT_FALSE(find_next_switch(cp, lim, lim.length()).has_value());
}

TEST(SwitchPoints, CandidatesAreOrderedAndOnTheLimit) {
  const auto cp = demo::constraints(1);
  const auto lim = compute_limit_curves(cp, 1000);
  const auto all = all_switch_points(cp, lim);
  ASSERT_FALSE(all.empty());
  for (std::size_t k = 0; k < all.size(); ++k) {
    const auto& p = all[k].location;
    EXPECT_GT(p.s, 0.0);
    EXPECT_LE(p.s, lim.length());
    EXPECT_NEAR(p.sdot, lim.mvc_star_at(p.s), 1e-6 * std::max(1.0, p.sdot))
        << "s=" << p.s;
    if (k > 0) EXPECT_GE(p.s, all[k - 1].location.s);
  }
}

TEST(SwitchPoints, TangentPointsMatchSlopes) {
  const auto cp = demo::constraints(1);
  const auto lim = compute_limit_curves(cp, 1000);
  int tangents = 0;
  for (const auto& sp : all_switch_points(cp, lim)) {
    if (sp.type != SwitchType::tangent) continue;
    ++tangents;
    const double s = sp.location.s;
    const double h = 1e-5;
    // On the MVC the admissible interval collapses, so alpha = beta there and
    // the MVC slope in z equals 2 * beta.
    const double zl = std::pow(lim.mvc_star_at(s - h), 2);
    const double zh = std::pow(lim.mvc_star_at(s + h), 2);
    const double slope = (zh - zl) / (2 * h);
    const auto ab = accel_bounds(cp, s, sp.location.sdot);
    EXPECT_NEAR(ab.alpha, ab.beta, 1e-4 * std::max(1.0, std::abs(ab.beta)));
    EXPECT_NEAR(slope, 2.0 * ab.beta, 1e-2 * std::max(1.0, std::abs(slope)))
        << "s=" << s;
  }
  EXPECT_GE(tangents, 1);
}

TEST(SwitchPoints, ClothoidInflectionIsZeroInertia) {
  const auto path = PathSpec::clothoid(4.0, 0.25, 1.7);
  const auto cp = unicycle_constraints(path, {0.5, 1.3}, {0.05, 0.1});
  const auto lim = compute_limit_curves(cp, 800);
  bool found = false;
  for (const auto& sp : all_switch_points(cp, lim)) {
    if (sp.type != SwitchType::zero_inertia) continue;
    found = true;
    EXPECT_NEAR(sp.location.s, 1.7, 1e-6);
    EXPECT_LT(std::abs(path.curvature(sp.location.s)), 1e-9);
  }
  EXPECT_TRUE(found);
}

TEST(SwitchPoints, DownwardJumpIsDiscontinuity) {
  const auto cp = step_down();
  const auto lim = compute_limit_curves(cp, 400);
  const auto sp = find_next_switch(cp, lim, 0.0);
  ASSERT_TRUE(sp.has_value());
  EXPECT_EQ(sp->type, SwitchType::discontinuity);
  EXPECT_NEAR(sp->location.s, 1.0, 1e-6);
  EXPECT_NEAR(sp->location.sdot, std::sqrt(0.3), 1e-6);
}

TEST(SwitchPoints, DemoCase2HasNothingOnDaggerSegments) {
  const auto cp = demo::constraints(2);
  const auto lim = compute_limit_curves(cp, 1000);
  ASSERT_FALSE(lim.dagger_segments().empty());
  EXPECT_TRUE(dagger_switch_candidates(cp, lim).empty());
  EXPECT_TRUE(tangent_points_on_dagger(lim, cp).empty());
}

TEST(SwitchPoints, ForwardSearchTerminates) {
  const auto cp = demo::constraints(1);
  const auto lim = compute_limit_curves(cp, 1000);
  double from = 0.0;
  int steps = 0;
  while (auto sp = find_next_switch(cp, lim, from)) {
    ASSERT_GT(sp->location.s, from);
    from = sp->location.s;
    ASSERT_LT(++steps, 100);
  }
  EXPECT_EQ(static_cast<std::size_t>(steps), all_switch_points(cp, lim).size());
}

}  // namespace
}  // namespace topp_ni
