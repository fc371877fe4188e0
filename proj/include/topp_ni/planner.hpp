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
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "topp_ni/constraints.hpp"
#include "topp_ni/error.hpp"
#include "topp_ni/limit_curves.hpp"
#include "topp_ni/phase_profile.hpp"
#include "topp_ni/switch_points.hpp"

namespace topp_ni {

struct Numerics {
  std::size_t grid = 1000;
  double step = 0.0;  // 0 selects length / 4000
  std::size_t switch_cap = 200;

  double step_for(double length) const {
    return step > 0.0 ? step : default_step(length);
  }

  friend bool operator==(const Numerics&, const Numerics&) = default;
};

enum class Transition { ab, ba };

// What happened to a switch point by the end of planning. `broken` marks an
// sp_{alpha->beta} whose backward alpha-profile left the admissible region
// without meeting the trajectory.
enum class EventStatus { active, superseded, discarded, broken };

inline std::string_view to_string(Transition t) {
  return t == Transition::ab ? "ab" : "ba";
}

inline std::string_view to_string(EventStatus s) {
  switch (s) {
    case EventStatus::active: return "active";
    case EventStatus::superseded: return "superseded";
    case EventStatus::discarded: return "discarded";
    case EventStatus::broken: return "broken";
  }
  return "unknown";
}

struct SwitchEvent {
  Transition transition = Transition::ab;
  PhasePoint point;
  std::optional<SwitchType> type;  // set for sp_{alpha->beta}
  int profile_id = -1;  // ba: beta-profile carrying the point; ab: its alpha-profile
  EventStatus status = EventStatus::active;
  int superseded_by = -1;  // log index of the replacing event
};

// Sum of 2 ds / (sdot_k + sdot_{k+1}) over samples: exact for z linear in s
// between samples and finite at sdot = 0 endpoints.
inline double traversal_time(const std::vector<PhaseProfile>& segments) {
  double t = 0.0;
  for (const auto& seg : segments) {
    for (std::size_t k = 0; k + 1 < seg.samples.size(); ++k) {
      const double ds = seg.samples[k + 1].s - seg.samples[k].s;
      if (ds <= 0.0) continue;
      const double v = seg.samples[k].sdot + seg.samples[k + 1].sdot;
      t += 2.0 * ds / std::max(v, 1e-12);
    }
  }
  return t;
}

struct Trajectory {
  std::vector<PhaseProfile> segments;
  std::vector<SwitchPoint> switch_ab;
  std::vector<PhasePoint> switch_ba;
  double traversal_time = 0.0;
  std::vector<SwitchEvent> log;
  std::vector<PhaseProfile> generated;  // every integrated profile, by id

  bool empty() const { return segments.empty(); }
  double begin() const { return segments.front().begin(); }
  double end() const { return segments.back().end(); }

  // z of the segment covering s; the first matching segment wins at shared
  // endpoints. NaN outside the covered range.
  double z_at(double s) const {
    for (const auto& seg : segments) {
      if (!seg.empty() && s >= seg.begin() && s <= seg.end()) return seg.z_at(s);
    }
    return std::nan("");
  }
  double sdot_at(double s) const {
    const double z = z_at(s);
    return std::isnan(z) ? z : std::sqrt(std::max(0.0, z));
  }
};

enum class PlanFailure { not_traversable, ni_failure, switch_cap };

inline std::string_view to_string(PlanFailure f) {
  switch (f) {
    case PlanFailure::not_traversable: return "not traversable";
    case PlanFailure::ni_failure: return "NI failure";
    case PlanFailure::switch_cap: return "switch-point cap exceeded";
  }
  return "unknown";
}

class PlanError : public Error {
 public:
  PlanError(PlanFailure cause, std::string message, double s_last,
            Trajectory partial)
      : Error(std::move(message)),
        cause_(cause),
        s_last_(s_last),
        partial_(std::move(partial)) {}

  PlanFailure cause() const { return cause_; }
  double s_last() const { return s_last_; }
  // Pieces generated before the failure, possibly with gaps.
  const Trajectory& partial() const { return partial_; }

 private:
  PlanFailure cause_;
  double s_last_;
  Trajectory partial_;
};

namespace detail {

// Relative lowering applied to switch-point velocities before integrating
// from them, so the first step does not register as an MVC* crossing.
inline constexpr double kSwitchLowering = 1e-6;

struct SwitchStarts {
  PhasePoint alpha_start;
  PhasePoint beta_start;
  PhasePoint anchor;  // the switch point the two profiles are joined at
};

// Zero-inertia points are stepped over by step/10 on each side; the rows are
// singular exactly at the point.
inline SwitchStarts switch_starts(const LimitCurves& limits,
                                  const SwitchPoint& sw, double step) {
  const double se = limits.length();
  const double v = sw.location.sdot * (1.0 - kSwitchLowering);
  SwitchStarts out;
  out.anchor = {sw.location.s, v};
  if (sw.type == SwitchType::zero_inertia) {
    const double eps = step / 10.0;
    const double sa = std::max(0.0, sw.location.s - eps);
    const double sb = std::min(se, sw.location.s + eps);
    const double low = 1.0 - kSwitchLowering;
    const double w = std::min({v, limits.mvc_star_at(sa) * low,
                               limits.mvc_star_at(sb) * low});
    out.alpha_start = {sa, w};
    out.beta_start = {sb, w};
    out.anchor.sdot = w;
  } else {
    out.alpha_start = out.anchor;
    out.beta_start = out.anchor;
  }
  return out;
}

// Joins a profile that started next to a zero-inertia point back to it.
inline void extend_to_anchor(PhaseProfile& p, PhasePoint anchor) {
  if (p.empty()) return;
  if (p.direction == Direction::backward && anchor.s > p.end()) {
    p.samples.push_back({anchor.s, p.samples.back().sdot});
  } else if (p.direction == Direction::forward && anchor.s < p.begin()) {
    p.samples.insert(p.samples.begin(), {anchor.s, p.samples.front().sdot});
  }
}

// Ordered, non-overlapping pieces of alpha/beta-profiles with their
// switch-point bookkeeping.
class ProfileChain {
 public:
  explicit ProfileChain(std::vector<SwitchEvent>& log) : log_(&log) {}

  const std::vector<PhaseProfile>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }

  void append(PhaseProfile p, int end_event = -1) {
    pieces_.push_back(std::move(p));
    end_event_.push_back(end_event);
  }

  struct Hit {
    std::size_t piece = 0;
    PhasePoint point;
  };

  // Earliest-s crossing of `alpha` with any beta piece.
  std::optional<Hit> find_crossing(const PhaseProfile& alpha) const {
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (pieces_[i].kind != ProfileKind::beta || pieces_[i].empty()) continue;
      if (auto x = intersect_profiles(alpha, pieces_[i])) {
        return Hit{i, *x};
      }
    }
    return std::nullopt;
  }

  // Cuts the chain at the crossing, records the new sp_{beta->alpha} and
  // appends the alpha piece. Returns the log index of the new event.
  int attach(const PhaseProfile& alpha, const Hit& hit, int ab_event) {
    const std::size_t i = hit.piece;
    SwitchEvent ev;
    ev.transition = Transition::ba;
    ev.point = hit.point;
    ev.profile_id = pieces_[i].id;
    log_->push_back(ev);
    const int idx = static_cast<int>(log_->size()) - 1;
    if (end_event_[i] >= 0) {
      auto& old = (*log_)[static_cast<std::size_t>(end_event_[i])];
      if (old.status == EventStatus::active) {
        old.status = EventStatus::superseded;
        old.superseded_by = idx;
      }
    }
    discard_after(i);
    pieces_[i] = pieces_[i].clipped(pieces_[i].begin(), hit.point.s);
    end_event_[i] = idx;
    PhaseProfile a = alpha.clipped(hit.point.s, alpha.end());
    append(std::move(a), ab_event);
    return idx;
  }

  // Appends an alpha piece that met no beta piece, dropping whatever the
  // chain held to its right.
  void attach_broken(const PhaseProfile& alpha, int ab_event) {
    const double cut = alpha.begin();
    while (!pieces_.empty() && pieces_.back().begin() >= cut) {
      drop_event(end_event_.back());
      pieces_.pop_back();
      end_event_.pop_back();
    }
    if (!pieces_.empty() && pieces_.back().end() > cut) {
      pieces_.back() = pieces_.back().clipped(pieces_.back().begin(), cut);
      drop_event(end_event_.back());
      end_event_.back() = -1;
    }
    if (ab_event >= 0) {
      (*log_)[static_cast<std::size_t>(ab_event)].status = EventStatus::broken;
    }
    append(alpha, ab_event);
  }

  // End of the run of contiguous pieces starting at s = 0.
  double continuous_end(double tol_s, double tol_z) const {
    if (pieces_.empty() || pieces_.front().begin() > tol_s) return 0.0;
    double end = pieces_.front().end();
    for (std::size_t i = 1; i < pieces_.size(); ++i) {
      const auto& prev = pieces_[i - 1];
      const auto& cur = pieces_[i];
      if (cur.empty()) continue;
      const double z0 = prev.samples.back().sdot * prev.samples.back().sdot;
      const double z1 = cur.samples.front().sdot * cur.samples.front().sdot;
      if (std::abs(cur.begin() - prev.end()) > tol_s ||
          std::abs(z1 - z0) > tol_z * std::max(1.0, z0)) {
        break;
      }
      end = cur.end();
    }
    return end;
  }

  std::vector<int> end_events() const { return end_event_; }

 private:
  void drop_event(int idx) {
    if (idx < 0) return;
    auto& ev = (*log_)[static_cast<std::size_t>(idx)];
    if (ev.status == EventStatus::active) ev.status = EventStatus::discarded;
  }

  void discard_after(std::size_t i) {
    while (pieces_.size() > i + 1) {
      drop_event(end_event_.back());
      pieces_.pop_back();
      end_event_.pop_back();
    }
  }

  std::vector<SwitchEvent>* log_;
  std::vector<PhaseProfile> pieces_;
  std::vector<int> end_event_;
};

inline int log_ab(std::vector<SwitchEvent>& log, const SwitchPoint& sw,
                  int alpha_id) {
  SwitchEvent ev;
  ev.transition = Transition::ab;
  ev.point = sw.location;
  ev.type = sw.type;
  ev.profile_id = alpha_id;
  log.push_back(ev);
  return static_cast<int>(log.size()) - 1;
}

inline Trajectory finish(std::vector<PhaseProfile> segments,
                         std::vector<SwitchEvent> log,
                         std::vector<PhaseProfile> generated) {
  Trajectory t;
  t.segments = std::move(segments);
  t.log = std::move(log);
  t.generated = std::move(generated);
  for (const auto& ev : t.log) {
    if (ev.status != EventStatus::active) continue;
    if (ev.transition == Transition::ab) {
      t.switch_ab.push_back({ev.point, *ev.type, LimitSource::mvc_star});
    } else {
      t.switch_ba.push_back(ev.point);
    }
  }
  std::sort(t.switch_ab.begin(), t.switch_ab.end(),
            [](const SwitchPoint& a, const SwitchPoint& b) {
              return a.location.s < b.location.s;
            });
  std::sort(t.switch_ba.begin(), t.switch_ba.end(),
            [](const PhasePoint& a, const PhasePoint& b) { return a.s < b.s; });
  t.traversal_time = traversal_time(t.segments);
  return t;
}

inline double continuity_tol_s(double se) { return 1e-9 * se; }
inline constexpr double kContinuityTolZ = 1e-8;

}  // namespace detail

// Phase-plane numerical integration planner.
//
//  1. From (0, sdot0) integrate a beta-profile forward until MVC*, sdot = 0
//     (not traversable) or s_e.
//  2. On an MVC* hit, take the first switch point along the limit curve,
//     integrate an alpha-profile backward from it to the generated beta
//     profiles (the crossing becomes sp_{beta->alpha}) and restart 1 from
//     the switch point.
//  3. Integrate the terminal alpha-profile from (s_e, sdot_e) back to the
//     chain.
//
// A beta-profile met by several alpha-profiles keeps the earliest-s crossing.
// An alpha-profile that meets no beta-profile leaves a gap; the planner still
// runs to the end and then throws PlanError(ni_failure) with the pieces.
inline Trajectory ni_plan(const ConstraintProfile& cp, const LimitCurves& limits,
                          double sdot_start, double sdot_end,
                          const Numerics& num = {}) {
  const double se = cp.length();
  const double step = num.step_for(se);
  std::vector<SwitchEvent> log;
  std::vector<PhaseProfile> generated;
  detail::ProfileChain chain(log);
  auto track = [&](PhaseProfile p) {
    p.id = static_cast<int>(generated.size());
    generated.push_back(p);
    return p;
  };
  auto partial = [&]() {
    return detail::finish(chain.pieces(), log, generated);
  };

  PhasePoint start{0.0, sdot_start};
  std::optional<PhasePoint> anchor;
  double last_switch = -1.0;
  std::size_t switches = 0;
  while (true) {
    PhaseProfile b = track(integrate_beta(cp, limits, start, step));
    if (anchor) detail::extend_to_anchor(b, *anchor);
    generated[static_cast<std::size_t>(b.id)] = b;
    chain.append(b);
    if (b.termination == Termination::hit_sdot_zero) {
      throw PlanError(PlanFailure::not_traversable,
                      "path not traversable: beta-profile reached sdot = 0 at s=" +
                          std::to_string(b.end()),
                      chain.continuous_end(detail::continuity_tol_s(se),
                                           detail::kContinuityTolZ),
                      partial());
    }
    if (b.termination == Termination::hit_se) break;
    const auto sw =
        find_next_switch(cp, limits, std::max(b.end(), last_switch));
    if (!sw) break;
    if (++switches > num.switch_cap) {
      throw PlanError(PlanFailure::switch_cap,
                      "switch-point cap exceeded", 0.0, partial());
    }
    const auto starts = detail::switch_starts(limits, *sw, step);
    PhaseProfile a = track(integrate_alpha(cp, limits, starts.alpha_start, step));
    detail::extend_to_anchor(a, starts.anchor);
    generated[static_cast<std::size_t>(a.id)] = a;
    const int ab = detail::log_ab(log, *sw, a.id);
    if (const auto hit = chain.find_crossing(a)) {
      chain.attach(a, *hit, ab);
    } else {
      chain.attach_broken(a, ab);
    }
    start = starts.beta_start;
    anchor = starts.anchor;
    last_switch = sw->location.s;
  }

  PhaseProfile ae = track(integrate_alpha(cp, limits, {se, sdot_end}, step));
  if (const auto hit = chain.find_crossing(ae)) {
    chain.attach(ae, *hit, -1);
  } else {
    chain.attach_broken(ae, -1);
  }
  const double reach = chain.continuous_end(detail::continuity_tol_s(se),
                                            detail::kContinuityTolZ);
  if (reach < se - 1e-6 * se) {
    throw PlanError(PlanFailure::ni_failure,
                    "NI failure: trajectory breaks at s=" + std::to_string(reach),
                    reach, partial());
  }
  return detail::finish(chain.pieces(), std::move(log), std::move(generated));
}

}  // namespace topp_ni
