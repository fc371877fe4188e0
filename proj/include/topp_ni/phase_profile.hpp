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
#include <string_view>
#include <vector>

#include "topp_ni/constraints.hpp"
#include "topp_ni/error.hpp"
#include "topp_ni/limit_curves.hpp"

namespace topp_ni {

struct PhasePoint {
  double s = 0.0;
  double sdot = 0.0;
};

enum class ProfileKind { alpha, beta };
enum class Direction { forward, backward };
enum class Termination {
  hit_mvc_star,
  hit_sdot_zero,
  hit_s0,
  hit_se,
  intersected_profile,
};

inline std::string_view to_string(ProfileKind k) {
  return k == ProfileKind::alpha ? "alpha" : "beta";
}

inline std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::hit_mvc_star: return "hit-mvc-star";
    case Termination::hit_sdot_zero: return "hit-sdot-zero";
    case Termination::hit_s0: return "hit-s0";
    case Termination::hit_se: return "hit-se";
    case Termination::intersected_profile: return "intersected-profile";
  }
  return "unknown";
}

// Integrated alpha- or beta-profile. Samples are kept in increasing s for
// both integration directions; sdot is recovered from z = sdot^2.
struct PhaseProfile {
  int id = -1;
  ProfileKind kind = ProfileKind::beta;
  Direction direction = Direction::forward;
  std::vector<PhasePoint> samples;
  Termination termination = Termination::hit_se;

  bool empty() const { return samples.empty(); }
  double begin() const { return samples.front().s; }
  double end() const { return samples.back().s; }

  // Point the integration started from.
  PhasePoint origin() const {
    return direction == Direction::forward ? samples.front() : samples.back();
  }
  // Point where integration stopped.
  PhasePoint terminal() const {
    return direction == Direction::forward ? samples.back() : samples.front();
  }

  // z linearly interpolated in s; s is clamped to the sampled range.
  double z_at(double s) const {
    if (s <= samples.front().s) return square(samples.front().sdot);
    if (s >= samples.back().s) return square(samples.back().sdot);
    const auto it = std::upper_bound(
        samples.begin(), samples.end(), s,
        [](double v, const PhasePoint& p) { return v < p.s; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (s - lo.s) / (hi.s - lo.s);
    return square(lo.sdot) + t * (square(hi.sdot) - square(lo.sdot));
  }
  double sdot_at(double s) const { return std::sqrt(std::max(0.0, z_at(s))); }

  // Restriction to [lo, hi] with interpolated end samples.
  PhaseProfile clipped(double lo, double hi) const {
    PhaseProfile out = *this;
    out.samples.clear();
    lo = std::max(lo, begin());
    hi = std::min(hi, end());
    if (lo > hi) return out;
    out.samples.push_back({lo, sdot_at(lo)});
    for (const auto& p : samples) {
      if (p.s > lo && p.s < hi) out.samples.push_back(p);
    }
    if (hi > lo) out.samples.push_back({hi, sdot_at(hi)});
    return out;
  }

 private:
  static double square(double v) { return v * v; }
};

inline double default_step(double length) { return length / 4000.0; }

namespace detail {

enum class Bound { lower, upper };

inline double accel_of(const ConstraintProfile& cp, Bound which, double s,
                       double z) {
  const auto rows = cp.accel_at(s);
  const double sdot = std::sqrt(std::max(z, 0.0));
  return which == Bound::lower ? alpha_of_rows(rows, sdot)
                               : beta_of_rows(rows, sdot);
}

// One classical RK4 step of dz/ds = 2 * accel(s, sqrt(z)); h may be negative.
inline double rk4_step(const ConstraintProfile& cp, Bound which, double s,
                       double z, double h) {
  const double k1 = 2.0 * accel_of(cp, which, s, z);
  const double k2 = 2.0 * accel_of(cp, which, s + 0.5 * h, z + 0.5 * h * k1);
  const double k3 = 2.0 * accel_of(cp, which, s + 0.5 * h, z + 0.5 * h * k2);
  const double k4 = 2.0 * accel_of(cp, which, s + h, z + h * k3);
  return z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline double limit_z(const LimitCurves& limits, double s) {
  const double v = limits.mvc_star_at(s);
  return v * v;
}

inline PhaseProfile integrate(const ConstraintProfile& cp,
                              const LimitCurves& limits, PhasePoint start,
                              double step, ProfileKind kind) {
  const double se = cp.length();
  if (!(step > 0.0)) step = default_step(se);
  if (!(start.s >= 0.0 && start.s <= se) || !(start.sdot >= 0.0) ||
      !std::isfinite(start.sdot)) {
    throw Error("integration start outside the phase plane");
  }
  const double cap = limits.mvc_star_at(start.s);
  if (start.sdot > cap + limits.velocity_tolerance() + 1e-9 * cap) {
    throw Error("integration start outside the admissible region");
  }
  const bool forward = kind == ProfileKind::beta;
  const Bound which = forward ? Bound::upper : Bound::lower;
  const double dir = forward ? 1.0 : -1.0;
  const double node_tol = 1e-7;

  PhaseProfile out;
  out.kind = kind;
  out.direction = forward ? Direction::forward : Direction::backward;
  std::vector<PhasePoint> pts;
  double s = start.s;
  double z = start.sdot * start.sdot;
  pts.push_back({s, std::sqrt(z)});

  const auto max_steps = static_cast<std::size_t>(se / step) + 16;
  for (std::size_t n = 0;; ++n) {
    if (forward ? s >= se : s <= 0.0) {
      out.termination = forward ? Termination::hit_se : Termination::hit_s0;
      break;
    }
    if (n > max_steps) throw Error("integration did not terminate");
    if (z <= 0.0 && dir * accel_of(cp, which, s, 0.0) <= 0.0) {
      out.termination = Termination::hit_sdot_zero;
      break;
    }
    // Steps land on the shared grid k * step.
    double next;
    if (forward) {
      next = (std::floor(s / step + node_tol) + 1.0) * step;
      if (next > se - 0.01 * step) next = se;
    } else {
      next = (std::ceil(s / step - node_tol) - 1.0) * step;
      if (next < 0.01 * step) next = 0.0;
    }
    const double h = next - s;
    const double zn = rk4_step(cp, which, s, z, h);
    if (zn <= 0.0) {
      const double t = z / (z - zn);
      pts.push_back({s + t * h, 0.0});
      out.termination = Termination::hit_sdot_zero;
      break;
    }
    if (zn > limit_z(limits, next)) {
      // Bisection on the partial step for the MVC* crossing.
      double lo = 0.0;
      double hi = 1.0;
      double zlo = z;
      while ((hi - lo) * std::abs(h) > 1e-10 * se) {
        const double mid = 0.5 * (lo + hi);
        const double zm = rk4_step(cp, which, s, z, mid * h);
        if (zm > limit_z(limits, s + mid * h)) {
          hi = mid;
        } else {
          lo = mid;
          zlo = zm;
        }
      }
      if (lo > 0.0) pts.push_back({s + lo * h, std::sqrt(std::max(zlo, 0.0))});
      out.termination = Termination::hit_mvc_star;
      break;
    }
    s = next;
    z = zn;
    pts.push_back({s, std::sqrt(z)});
  }
  if (!forward) std::reverse(pts.begin(), pts.end());
  out.samples = std::move(pts);
  return out;
}

}  // namespace detail

// Forward integration with maximum path acceleration until MVC*, s_e or
// sdot = 0 is reached.
inline PhaseProfile integrate_beta(const ConstraintProfile& cp,
                                   const LimitCurves& limits, PhasePoint start,
                                   double step = 0.0) {
  return detail::integrate(cp, limits, start, step, ProfileKind::beta);
}

// Backward integration with minimum path acceleration until MVC*, s = 0 or
// sdot = 0 is reached.
inline PhaseProfile integrate_alpha(const ConstraintProfile& cp,
                                    const LimitCurves& limits, PhasePoint start,
                                    double step = 0.0) {
  return detail::integrate(cp, limits, start, step, ProfileKind::alpha);
}

inline constexpr double kTouchTolerance = 1e-12;

// Every sign change of z_a - z_b over the common s range, in increasing s.
// A run of near-touching samples (|gap| <= 1e-12) counts once, at its
// smallest s.
inline std::vector<PhasePoint> profile_crossings(const PhaseProfile& a,
                                                 const PhaseProfile& b) {
  std::vector<PhasePoint> out;
  if (a.empty() || b.empty()) return out;
  const double lo = std::max(a.begin(), b.begin());
  const double hi = std::min(a.end(), b.end());
  if (lo > hi) return out;
  std::vector<double> ss;
  ss.reserve(a.samples.size() + b.samples.size() + 2);
  ss.push_back(lo);
  for (const auto* p : {&a, &b}) {
    for (const auto& q : p->samples) {
      if (q.s > lo && q.s < hi) ss.push_back(q.s);
    }
  }
  ss.push_back(hi);
  std::sort(ss.begin(), ss.end());
  ss.erase(std::unique(ss.begin(), ss.end()), ss.end());

  auto gap = [&](double s) { return a.z_at(s) - b.z_at(s); };
  auto sign = [](double d) {
    return d > kTouchTolerance ? 1 : (d < -kTouchTolerance ? -1 : 0);
  };
  int prev_sign = 0;
  double prev_d = 0.0;
  double prev_s = 0.0;
  bool in_touch = false;
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const double d = gap(ss[i]);
    const int sg = sign(d);
    if (sg == 0) {
      if (!in_touch) {
        out.push_back({ss[i], a.sdot_at(ss[i])});
        in_touch = true;
      }
    } else {
      if (!in_touch && prev_sign != 0 && sg != prev_sign) {
        const double s = prev_s + (ss[i] - prev_s) * prev_d / (prev_d - d);
        out.push_back({s, a.sdot_at(s)});
      }
      in_touch = false;
      prev_sign = sg;
    }
    prev_d = d;
    prev_s = ss[i];
  }
  return out;
}

// Earliest-s intersection of two profiles, if any.
inline std::optional<PhasePoint> intersect_profiles(const PhaseProfile& a,
                                                    const PhaseProfile& b) {
  auto all = profile_crossings(a, b);
  if (all.empty()) return std::nullopt;
  return all.front();
}

}  // namespace topp_ni
