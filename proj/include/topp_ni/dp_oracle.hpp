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
#include <vector>

#include "topp_ni/constraints.hpp"
#include "topp_ni/error.hpp"
#include "topp_ni/limit_curves.hpp"
#include "topp_ni/phase_profile.hpp"

namespace topp_ni {

struct DpOptions {
  std::size_t n_s = 256;
  std::size_t n_z = 256;
  double sdot_floor = 1e-4;
};

namespace detail {

// Linear bounds on z' from one acceleration row, holding the row at the
// stage midpoint: A (z'-z)/(2 ds) + B (z+z')/2 + C <= 0.
struct StageReach {
  double lo = -kInfinity;
  double hi = kInfinity;
  double violation = -kInfinity;  // > 0 when a row with no z' term fails
};

inline StageReach stage_reach(std::span<const AccelRow> rows, double z,
                              double ds) {
  StageReach out;
  for (const auto& r : rows) {
    const double k = r.a / (2.0 * ds) + r.b / 2.0;
    const double rhs = r.a * z / (2.0 * ds) - r.b * z / 2.0 - r.c;
    if (k > 0.0) {
      out.hi = std::min(out.hi, rhs / k);
    } else if (k < 0.0) {
      out.lo = std::max(out.lo, rhs / k);
    } else {
      out.violation = std::max(out.violation, -rhs);
    }
  }
  return out;
}

// Sorted z values with finite cost-to-go; linear in sdot in between,
// infinite outside.
struct DpStage {
  std::vector<double> z;
  std::vector<double> v;

  bool empty() const { return z.empty(); }

  double at(double q, double tol) const {
    if (z.empty() || q < z.front() - tol || q > z.back() + tol) return kInfinity;
    if (q <= z.front()) return v.front();
    if (q >= z.back()) return v.back();
    const auto it = std::upper_bound(z.begin(), z.end(), q);
    const auto k = static_cast<std::size_t>(it - z.begin());
    // Interpolate in sdot, where the cost-to-go is closer to linear.
    const double r0 = std::sqrt(z[k - 1]);
    const double w = (std::sqrt(q) - r0) / (std::sqrt(z[k]) - r0);
    return (1.0 - w) * v[k - 1] + w * v[k];
  }
};

inline double dp_zmax(const ConstraintProfile& cp, const LimitCurves& limits,
                      const std::vector<double>& s_nodes, double sd0, double sde) {
  double zmax = std::max(sd0 * sd0, sde * sde);
  bool unbounded = false;
  for (double s : s_nodes) {
    const double m = limits.mvc_star_at(s);
    if (std::isfinite(m)) {
      zmax = std::max(zmax, m * m);
    } else {
      unbounded = true;
    }
  }
  if (unbounded) {
    // Nothing above the extremal profiles is reachable.
    const double se = cp.length();
    double top = 0.0;
    for (const auto& p : {integrate_beta(cp, limits, {0.0, sd0}),
                          integrate_alpha(cp, limits, {se, sde})}) {
      for (const auto& q : p.samples) top = std::max(top, q.sdot);
    }
    zmax = std::max(zmax, 1.44 * top * top);
  }
  return zmax;
}

// Interval of z at one stage from which some admissible transition lands
// in [next_lo, next_hi]. The defect function is convex and piecewise linear
// in z, so its sublevel set is found by golden-section search and bisection.
inline std::optional<std::pair<double, double>> feasible_band(
    std::span<const AccelRow> rows, double h, double cap, double next_lo,
    double next_hi, double tol) {
  auto defect = [&](double z) {
    const auto r = stage_reach(rows, z, h);
    return std::max({-z, z - cap, r.violation, r.lo - r.hi, r.lo - next_hi,
                     next_lo - r.hi});
  };
  double a = 0.0;
  double b = cap;
  constexpr double kGold = 0.6180339887498949;
  double x1 = b - kGold * (b - a);
  double x2 = a + kGold * (b - a);
  double f1 = defect(x1);
  double f2 = defect(x2);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, cap); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGold * (b - a);
      f1 = defect(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGold * (b - a);
      f2 = defect(x2);
    }
  }
  double best = 0.5 * (a + b);
  for (double cand : {0.0, cap, x1, x2}) {
    if (defect(cand) < defect(best)) best = cand;
  }
  if (defect(best) > tol) return std::nullopt;
  auto edge = [&](double in, double out) {
    if (defect(out) <= tol) return out;
    for (int it = 0; it < 200 && std::abs(out - in) > 1e-15 * std::max(1.0, cap);
         ++it) {
      const double mid = 0.5 * (in + out);
      (defect(mid) <= tol ? in : out) = mid;
    }
    return in;
  };
  return std::pair{edge(best, 0.0), edge(best, cap)};
}

}  // namespace detail

// Minimum traversal time by value iteration on an (s, z = sdot^2) grid,
// backward from s_e. Transitions keep z linear in s over a stage and must
// satisfy every acceleration row at the stage midpoint; their cost is
// ds / mean(sdot). Each stage carries the n_z nodes (uniform in sdot)
// inside its feasible band plus the two band edges, so boundary states need
// no snapping. Returns nullopt when the end state cannot be reached.
inline std::optional<double> dp_min_time(const ConstraintProfile& cp,
                                         const LimitCurves& limits,
                                         double sdot_start, double sdot_end,
                                         const DpOptions& opt = {}) {
  if (opt.n_s < 32 || opt.n_z < 32) {
    throw Error("dp_min_time: grid sizes must be >= 32");
  }
  const double se = cp.length();
  const std::size_t ns = opt.n_s;
  const std::size_t nz = opt.n_z;
  std::vector<double> s_nodes(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    s_nodes[i] = se * static_cast<double>(i) / static_cast<double>(ns - 1);
  }

  const double zmax = detail::dp_zmax(cp, limits, s_nodes, sdot_start, sdot_end);
  const double dv = std::sqrt(zmax) / static_cast<double>(nz - 1);
  const double tol = 1e-12 * std::max(1.0, zmax);
  auto cap_at = [&](double s) {
    const double m = limits.mvc_star_at(s);
    return std::isfinite(m) ? std::min(m * m, zmax) : zmax;
  };

  const double z0 = sdot_start * sdot_start;
  const double ze = sdot_end * sdot_end;
  if (ze > cap_at(se) + tol || z0 > cap_at(0.0) + tol) return std::nullopt;
  detail::DpStage next{{ze}, {0.0}};

  auto cost_from = [&](double z, std::span<const AccelRow> rows, double h) {
    const auto r = detail::stage_reach(rows, z, h);
    if (r.violation > tol) return kInfinity;
    const double lo = std::max(r.lo, next.z.front());
    const double hi = std::min(r.hi, next.z.back());
    if (lo > hi + tol) return kInfinity;
    double best = kInfinity;
    auto consider = [&](double z2) {
      const double v = next.at(z2, tol);
      if (!std::isfinite(v)) return;
      const double mean = std::max(
          0.5 * (std::sqrt(z) + std::sqrt(std::max(z2, 0.0))), opt.sdot_floor);
      best = std::min(best, v + h / mean);
    };
    consider(lo);
    consider(std::max(lo, hi));
    auto it = std::upper_bound(next.z.begin(), next.z.end(), lo);
    for (; it != next.z.end() && *it < hi; ++it) consider(*it);
    return best;
  };

  for (std::size_t i = ns - 1; i-- > 0;) {
    const double h = s_nodes[i + 1] - s_nodes[i];
    const auto rows = cp.accel_at(0.5 * (s_nodes[i] + s_nodes[i + 1]));
    if (i == 0) {
      const double t = cost_from(z0, rows, h);
      if (!std::isfinite(t) || z0 > cap_at(0.0) + tol) return std::nullopt;
      return t;
    }
    const auto band = detail::feasible_band(rows, h, cap_at(s_nodes[i]),
                                            next.z.front(), next.z.back(), tol);
    if (!band) return std::nullopt;
    detail::DpStage cur;
    auto add = [&](double z) {
      const double v = cost_from(z, rows, h);
      if (std::isfinite(v)) {
        cur.z.push_back(z);
        cur.v.push_back(v);
      }
    };
    add(band->first);
    const auto first =
        static_cast<std::size_t>(std::floor(std::sqrt(band->first) / dv)) + 1;
    for (std::size_t k = first; k < nz; ++k) {
      const double z = std::pow(dv * static_cast<double>(k), 2);
      if (z >= band->second) break;
      add(z);
    }
    if (band->second > band->first) add(band->second);
    if (cur.empty()) return std::nullopt;
    std::swap(cur, next);
  }
  return std::nullopt;
}

}  // namespace topp_ni
