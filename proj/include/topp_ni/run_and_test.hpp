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

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "topp_ni/constraints.hpp"
#include "topp_ni/limit_curves.hpp"
#include "topp_ni/phase_profile.hpp"
#include "topp_ni/planner.hpp"
#include "topp_ni/switch_points.hpp"

namespace topp_ni {

// One pass through the backward-integration step of the run-and-test loop.
struct ContinuityStep {
  PhasePoint q;  // switch point or terminal point the alpha-profile started from
  bool terminal = false;
  bool intersected = false;
  bool is_continuous = true;  // value after the step
  double s_last = 0.0;        // value after the step
};

struct RtReport {
  bool feasible = false;
  double s_last = 0.0;
  Trajectory longest;  // T*, the longest continuous trajectory from s = 0
  std::vector<ContinuityStep> continuity_log;
  std::vector<Interval> gaps;
  std::vector<Interval> failure_segments;  // MVC-dagger segments meeting a gap
};

// Run-and-test: repeats the integration loop of ni_plan while tracking the
// longest continuous trajectory T* from (0, sdot0) and the coordinate sLast
// it reaches. A beta-profile that reaches sdot = 0 is handled like one
// hitting any other boundary. Never throws PlanError.
inline RtReport rt_detect(const ConstraintProfile& cp, const LimitCurves& limits,
                          double sdot_start, double sdot_end,
                          const Numerics& num = {}) {
  const double se = cp.length();
  const double step = num.step_for(se);
  std::vector<SwitchEvent> log;
  std::vector<PhaseProfile> generated;
  detail::ProfileChain tstar(log);
  auto track = [&](PhaseProfile p) {
    p.id = static_cast<int>(generated.size());
    generated.push_back(p);
    return p;
  };

  RtReport rep;
  bool is_continuous = true;
  double s_last = 0.0;
  PhasePoint p{0.0, sdot_start};
  std::optional<PhasePoint> anchor;
  double last_switch = -1.0;
  for (std::size_t iter = 0;; ++iter) {
    PhaseProfile b = track(integrate_beta(cp, limits, p, step));
    if (anchor) detail::extend_to_anchor(b, *anchor);
    generated[static_cast<std::size_t>(b.id)] = b;
    if (is_continuous) {
      tstar.append(b);
      s_last = b.end();
    }

    std::optional<SwitchPoint> sw;
    if (b.termination != Termination::hit_se && iter < num.switch_cap) {
      sw = find_next_switch(cp, limits, std::max(b.end(), last_switch));
    }
    PhaseProfile a;
    detail::SwitchStarts starts;
    int ab = -1;
    ContinuityStep entry;
    if (sw) {
      starts = detail::switch_starts(limits, *sw, step);
      a = track(integrate_alpha(cp, limits, starts.alpha_start, step));
      detail::extend_to_anchor(a, starts.anchor);
      generated[static_cast<std::size_t>(a.id)] = a;
      ab = detail::log_ab(log, *sw, a.id);
      entry.q = sw->location;
    } else {
      a = track(integrate_alpha(cp, limits, {se, sdot_end}, step));
      entry.q = {se, sdot_end};
      entry.terminal = true;
    }

    if (const auto hit = tstar.find_crossing(a)) {
      tstar.attach(a, *hit, ab);
      is_continuous = true;
      s_last = entry.q.s;
      entry.intersected = true;
    } else {
      if (ab >= 0) log[static_cast<std::size_t>(ab)].status = EventStatus::broken;
      is_continuous = false;
      rep.gaps.push_back({s_last, a.begin()});
    }
    entry.is_continuous = is_continuous;
    entry.s_last = s_last;
    rep.continuity_log.push_back(entry);

    if (entry.terminal) break;
    p = starts.beta_start;
    anchor = starts.anchor;
    last_switch = sw->location.s;
  }

  rep.s_last = s_last;
  rep.feasible = !(s_last < se - 1e-6 * se);
  rep.longest = detail::finish(tstar.pieces(), std::move(log), std::move(generated));
  for (const auto& seg : limits.dagger_segments()) {
    for (const auto& g : rep.gaps) {
      if (seg.begin <= g.end && seg.end >= g.begin) {
        rep.failure_segments.push_back(seg);
        break;
      }
    }
  }
  return rep;
}

struct Property6Report {
  bool c1 = false;  // MVC*(s) < T(s) somewhere
  std::optional<double> witness;
  bool c2 = false;  // no discontinuity/zero-inertia point on MVC-dagger
  std::vector<Interval> mvc_ddagger;  // dagger parts strictly below T
  std::vector<SwitchPoint> dagger_candidates;

  bool holds() const { return c1 && c2; }
};

// Limit curves and NI plan with the velocity rows ignored.
inline Trajectory plan_torque_only(const ConstraintProfile& cp, double sdot_start,
                                   double sdot_end, const Numerics& num = {}) {
  const ConstraintProfile torque = cp.without_velocity_rows();
  const LimitCurves lim = compute_limit_curves(torque, num.grid);
  return ni_plan(torque, lim, sdot_start, sdot_end, num);
}

// Checks the two sufficient failure conditions against the torque-only
// trajectory T. The witness is the grid point of largest T - MVC* within the
// first place where T rises above MVC*.
inline Property6Report check_property6(const ConstraintProfile& cp,
                                       const LimitCurves& limits,
                                       const Trajectory& unbounded) {
  Property6Report rep;
  const auto grid = limits.grid();
  const auto star = limits.mvc_star();
  const auto& dag = limits.dagger_flags();
  double worst = 0.0;
  bool in_run = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = unbounded.sdot_at(grid[i]);
    const double eps = 1e-6 * std::max(1.0, std::isnan(t) ? 0.0 : t);
    const bool below = !std::isnan(t) && star[i] < t - eps;
    const bool ddagger = below && dag[i];
    if (ddagger && !in_run) rep.mvc_ddagger.push_back({grid[i], grid[i]});
    if (ddagger) rep.mvc_ddagger.back().end = grid[i];
    const bool first_run = rep.mvc_ddagger.size() <= 1;
    if (below && first_run && t - star[i] > worst) {
      worst = t - star[i];
      rep.witness = grid[i];
    }
    in_run = ddagger;
  }
  rep.c1 = rep.witness.has_value();
  rep.dagger_candidates = dagger_switch_candidates(cp, limits);
  rep.c2 = rep.dagger_candidates.empty();
  return rep;
}

}  // namespace topp_ni
