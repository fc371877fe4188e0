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
#include "topp_ni/limit_curves.hpp"
#include "topp_ni/phase_profile.hpp"

namespace topp_ni {

enum class SwitchType { tangent, discontinuity, zero_inertia };
enum class LimitSource { mvc, mvc_star };

inline std::string_view to_string(SwitchType t) {
  switch (t) {
    case SwitchType::tangent: return "tangent";
    case SwitchType::discontinuity: return "discontinuity";
    case SwitchType::zero_inertia: return "zero-inertia";
  }
  return "unknown";
}

// Candidate sp_{alpha->beta} on a limit curve.
struct SwitchPoint {
  PhasePoint location;
  SwitchType type = SwitchType::tangent;
  LimitSource source_curve = LimitSource::mvc_star;
};

struct SwitchDetection {
  double tangent_rel_tol = 1e-6;
  double jump_factor = 10.0;
  double zero_inertia_rel_tol = 1e-9;
};

namespace detail {

inline double row_scale(std::span<const AccelRow> rows) {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.a));
  return m;
}

// Derivative step for limit-curve slopes.
inline double slope_step(const LimitCurves& limits) {
  return 1e-6 * limits.length();
}

// k_mvc - alpha/sdot on MVC at s, with k_mvc by central differences. NaN when
// MVC is infinite nearby.
inline double tangent_gap(const LimitCurves& limits, double s) {
  const double se = limits.length();
  const double d = slope_step(limits);
  const double lo = std::max(0.0, s - d);
  const double hi = std::min(se, s + d);
  const double m = limits.mvc_at(s);
  const double ml = limits.mvc_at(lo);
  const double mh = limits.mvc_at(hi);
  if (!std::isfinite(m) || !std::isfinite(ml) || !std::isfinite(mh)) {
    return std::nan("");
  }
  const double k_mvc = (mh - ml) / (hi - lo);
  const double k_alpha = alpha(limits.constraints(), s, m) / m;
  return k_mvc - k_alpha;
}

// Same on the velocity limit V(s), for the tangent scan on MVC-dagger.
inline double tangent_gap_on_vlim(const LimitCurves& limits, double s) {
  const double se = limits.length();
  const double d = slope_step(limits);
  const double lo = std::max(0.0, s - d);
  const double hi = std::min(se, s + d);
  const double v = limits.vlim_at(s);
  const double vl = limits.vlim_at(lo);
  const double vh = limits.vlim_at(hi);
  if (!std::isfinite(v) || !std::isfinite(vl) || !std::isfinite(vh)) {
    return std::nan("");
  }
  const double k_v = (vh - vl) / (hi - lo);
  return k_v - alpha(limits.constraints(), s, v) / v;
}

template <class F>
double bisect_sign_change(F&& f, double lo, double hi, double tol) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Zeros of some A_i(s) inside (lo, hi), found from sign changes between the
// interval ends. Rows that vanish identically are ignored.
inline std::optional<double> zero_inertia_root(const ConstraintProfile& cp,
                                               double lo, double hi,
                                               double rel_tol) {
  const auto rl = cp.accel_at(lo);
  const auto rh = cp.accel_at(hi);
  const double scale = std::max({row_scale(rl), row_scale(rh), 1e-300});
  std::optional<double> best;
  for (std::size_t i = 0; i < rl.size(); ++i) {
    const double al = rl[i].a;
    const double ah = rh[i].a;
    if (std::abs(al) <= rel_tol * scale && std::abs(ah) <= rel_tol * scale) {
      continue;
    }
    if (al * ah > 0.0) continue;
    double root;
    if (al == 0.0) {
      root = lo;
    } else if (ah == 0.0) {
      root = hi;
    } else {
      root = bisect_sign_change([&](double s) { return cp.accel_at(s)[i].a; },
                                lo, hi, 1e-13 * cp.length());
    }
    if (!best || root < *best) best = root;
  }
  return best;
}

// Refines a suspected jump of f on [lo, hi] by halving towards the larger
// sub-jump. Returns the jump location when it survives refinement with a
// bounded magnitude (vertical asymptotes and steep smooth parts do not).
template <class F>
std::optional<double> refine_jump(F&& f, double lo, double hi, double tol) {
  const double j0 = std::abs(f(hi) - f(lo));
  double flo = f(lo);
  double fhi = f(hi);
  for (int it = 0; it < 60 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (!std::isfinite(fm)) return std::nullopt;
    if (std::abs(fm - flo) >= std::abs(fhi - fm)) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  const double j = std::abs(fhi - flo);
  if (j >= 0.5 * j0 && j <= 2.0 * j0) return 0.5 * (lo + hi);
  return std::nullopt;
}

inline double local_median(const std::vector<double>& v, std::size_t k,
                           std::size_t half_window) {
  const std::size_t a = k > half_window ? k - half_window : 0;
  const std::size_t b = std::min(v.size(), k + half_window + 1);
  std::vector<double> w;
  for (std::size_t i = a; i < b; ++i) {
    if (std::isfinite(v[i])) w.push_back(v[i]);
  }
  if (w.empty()) return 0.0;
  std::nth_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(w.size() / 2),
                   w.end());
  return w[w.size() / 2];
}

struct CandidateScan {
  bool tangent = true;
  bool discontinuity = true;
  bool zero_inertia = true;
  bool only_dagger = false;
  bool first_only = true;
};

inline bool better(const SwitchPoint& a, const SwitchPoint& b) {
  if (a.location.s != b.location.s) return a.location.s < b.location.s;
  return static_cast<int>(a.type) < static_cast<int>(b.type);
}

inline std::vector<SwitchPoint> scan_candidates(const ConstraintProfile& cp,
                                                const LimitCurves& limits,
                                                double from_s,
                                                const CandidateScan& what,
                                                const SwitchDetection& opt) {
  std::vector<SwitchPoint> found;
  const auto grid = limits.grid();
  const auto star = limits.mvc_star();
  const std::size_t n = grid.size();
  const double se = limits.length();
  const double s_tol = 1e-12 * se;

  std::vector<double> jumps(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    jumps[k] = std::isfinite(star[k]) && std::isfinite(star[k + 1])
                   ? std::abs(star[k + 1] - star[k])
                   : std::nan("");
  }
  double vscale = 1.0;
  for (double v : star) {
    if (std::isfinite(v)) vscale = std::max(vscale, v);
  }

  double g_prev = std::nan("");
  bool g_prev_valid = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double lo = grid[k];
    const double hi = grid[k + 1];
    if (hi <= from_s) continue;
    std::vector<SwitchPoint> here;
    const auto keep = [&](double s) {
      return s > from_s + s_tol && (!what.only_dagger || limits.in_dagger_segment(s));
    };

    std::optional<double> zi;
    if (what.zero_inertia || what.tangent) {
      zi = zero_inertia_root(cp, lo, hi, opt.zero_inertia_rel_tol);
    }
    if (what.zero_inertia && zi && keep(*zi)) {
      const double v = limits.mvc_star_at(*zi);
      if (std::isfinite(v)) {
        here.push_back({{*zi, v}, SwitchType::zero_inertia,
                        limits.on_dagger_at(*zi) ? LimitSource::mvc_star
                                                 : LimitSource::mvc});
      }
    }

    if (what.tangent) {
      const bool plain = !limits.dagger_flags()[k] && !limits.dagger_flags()[k + 1];
      double g_lo = g_prev_valid ? g_prev : tangent_gap(limits, lo);
      const double g_hi = tangent_gap(limits, hi);
      g_prev = g_hi;
      g_prev_valid = true;
      if (plain && !zi && std::isfinite(g_lo) && std::isfinite(g_hi) &&
          g_lo < 0.0 && g_hi >= 0.0) {
        const double s = bisect_sign_change(
            [&](double x) { return tangent_gap(limits, x); }, lo, hi, 1e-12 * se);
        const double m = limits.mvc_at(s);
        const double d = slope_step(limits);
        const double kl = (m - limits.mvc_at(s - d)) / d;
        const double kr = (limits.mvc_at(s + d) - m) / d;
        const double k_alpha = alpha(cp, s, m) / m;
        const double k_mvc = 0.5 * (kl + kr);
        const bool smooth = std::abs(kl - kr) <= 1e-3 * (1.0 + std::abs(k_mvc));
        if (smooth &&
            std::abs(k_mvc - k_alpha) <= opt.tangent_rel_tol * (1.0 + std::abs(k_mvc)) &&
            !limits.on_dagger_at(s) && keep(s)) {
          here.push_back({{s, m}, SwitchType::tangent, LimitSource::mvc});
        }
      }
    } else {
      g_prev_valid = false;
    }

    if (what.discontinuity && std::isfinite(jumps[k]) &&
        jumps[k] > 1e-9 * vscale &&
        jumps[k] > opt.jump_factor * local_median(jumps, k, 8)) {
      const auto at = refine_jump([&](double x) { return limits.mvc_star_at(x); },
                                  lo, hi, 1e-9 * se);
      if (at && keep(*at)) {
        const double d = 1e-9 * se;
        const double v = std::min(limits.mvc_star_at(std::max(0.0, *at - d)),
                                  limits.mvc_star_at(std::min(se, *at + d)));
        here.push_back({{*at, v}, SwitchType::discontinuity,
                        limits.on_dagger_at(*at) ? LimitSource::mvc_star
                                                 : LimitSource::mvc});
      }
    }

    if (!here.empty()) {
      std::sort(here.begin(), here.end(), better);
      if (what.first_only) {
        found.push_back(here.front());
        return found;
      }
      found.insert(found.end(), here.begin(), here.end());
    }
  }
  return found;
}

}  // namespace detail

// First tangent, discontinuity or zero-inertia point on the limit curve with
// s > from_s. Coincident candidates are ordered tangent, discontinuity,
// zero-inertia.
inline std::optional<SwitchPoint> find_next_switch(
    const ConstraintProfile& cp, const LimitCurves& limits, double from_s,
    const SwitchDetection& opt = {}) {
  auto found = detail::scan_candidates(cp, limits, from_s, {}, opt);
  if (found.empty()) return std::nullopt;
  return found.front();
}

// Every candidate of any type after from_s.
inline std::vector<SwitchPoint> all_switch_points(
    const ConstraintProfile& cp, const LimitCurves& limits, double from_s = -1.0,
    const SwitchDetection& opt = {}) {
  detail::CandidateScan what;
  what.first_only = false;
  return detail::scan_candidates(cp, limits, from_s, what, opt);
}

// Discontinuity and zero-inertia candidates lying inside MVC-dagger segments.
inline std::vector<SwitchPoint> dagger_switch_candidates(
    const ConstraintProfile& cp, const LimitCurves& limits,
    const SwitchDetection& opt = {}) {
  detail::CandidateScan what;
  what.tangent = false;
  what.only_dagger = true;
  what.first_only = false;
  return detail::scan_candidates(cp, limits, -1.0, what, opt);
}

// Points strictly inside MVC-dagger segments satisfying the tangent switch
// definition on V(s): the slope of V equals k_alpha and k_alpha = k_beta.
inline std::vector<SwitchPoint> tangent_points_on_dagger(
    const LimitCurves& limits, const ConstraintProfile& cp,
    const SwitchDetection& opt = {}) {
  std::vector<SwitchPoint> out;
  const auto grid = limits.grid();
  const double se = limits.length();
  for (const auto& seg : limits.dagger_segments()) {
    std::vector<double> pts{seg.begin};
    for (double s : grid) {
      if (s > seg.begin && s < seg.end) pts.push_back(s);
    }
    pts.push_back(seg.end);
    // Stay strictly inside the segment.
    const double inset = 1e-9 * se;
    pts.front() = std::min(pts.front() + inset, seg.end);
    pts.back() = std::max(pts.back() - inset, seg.begin);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const double lo = pts[k];
      const double hi = pts[k + 1];
      if (!(hi > lo)) continue;
      const double glo = detail::tangent_gap_on_vlim(limits, lo);
      const double ghi = detail::tangent_gap_on_vlim(limits, hi);
      if (!std::isfinite(glo) || !std::isfinite(ghi)) continue;
      if ((glo < 0.0) == (ghi < 0.0) && glo != 0.0 && ghi != 0.0) continue;
      const double s = detail::bisect_sign_change(
          [&](double x) { return detail::tangent_gap_on_vlim(limits, x); }, lo,
          hi, 1e-12 * se);
      const double v = limits.vlim_at(s);
      const auto ab = accel_bounds(cp, s, v);
      const double g = detail::tangent_gap_on_vlim(limits, s);
      const double k_v = g + ab.alpha / v;
      const bool slope_match =
          std::abs(g) <= opt.tangent_rel_tol * (1.0 + std::abs(k_v));
      const bool saturated =
          std::abs(ab.alpha - ab.beta) <= 1e-6 * std::max(1.0, std::abs(ab.beta));
      if (slope_match && saturated) {
        out.push_back({{s, v}, SwitchType::tangent, LimitSource::mvc_star});
      }
    }
  }
  return out;
}

}  // namespace topp_ni
