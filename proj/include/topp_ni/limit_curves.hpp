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
#include <span>
#include <string>
#include <vector>

#include "topp_ni/constraints.hpp"
#include "topp_ni/error.hpp"

namespace topp_ni {

struct Interval {
  double begin = 0.0;
  double end = 0.0;

  bool contains(double s) const { return s >= begin && s <= end; }
  double length() const { return end - begin; }
};

// MVC, V, MVC* = min(MVC, V) and the MVC-dagger segments (where V is the
// binding limit) sampled on a uniform grid. Point queries between grid nodes
// are evaluated exactly from the constraint rows, not interpolated.
class LimitCurves {
 public:
  const ConstraintProfile& constraints() const { return cp_; }
  double length() const { return cp_.length(); }

  std::span<const double> grid() const { return grid_; }
  std::span<const double> mvc() const { return mvc_; }
  std::span<const double> vlim() const { return vlim_; }
  std::span<const double> mvc_star() const { return mvc_star_; }
  const std::vector<bool>& dagger_flags() const { return dagger_; }
  const std::vector<Interval>& dagger_segments() const { return segments_; }
  double velocity_tolerance() const { return eps_v_; }
  double spacing() const { return grid_[1] - grid_[0]; }

  double mvc_at(double s) const { return max_velocity(cp_, s); }
  double vlim_at(double s) const { return velocity_limit(cp_, s); }
  double mvc_star_at(double s) const {
    return std::min(mvc_at(s), vlim_at(s));
  }
  // V strictly below MVC at s, by more than the velocity tolerance.
  bool on_dagger_at(double s) const {
    return vlim_at(s) < mvc_at(s) - eps_v_;
  }
  bool in_dagger_segment(double s) const {
    return std::any_of(segments_.begin(), segments_.end(),
                       [s](const Interval& iv) { return iv.contains(s); });
  }

 private:
  friend LimitCurves compute_limit_curves(const ConstraintProfile&,
                                          std::size_t);
  explicit LimitCurves(ConstraintProfile cp) : cp_(std::move(cp)) {}

  ConstraintProfile cp_;
  std::vector<double> grid_;
  std::vector<double> mvc_;
  std::vector<double> vlim_;
  std::vector<double> mvc_star_;
  std::vector<bool> dagger_;
  std::vector<Interval> segments_;
  double eps_v_ = 0.0;
};

inline LimitCurves compute_limit_curves(const ConstraintProfile& cp,
                                        std::size_t grid_n) {
  if (grid_n < 16) throw Error("compute_limit_curves: grid_n must be >= 16");
  LimitCurves lc(cp);
  const double se = cp.length();
  lc.grid_.resize(grid_n);
  lc.mvc_.resize(grid_n);
  lc.vlim_.resize(grid_n);
  lc.mvc_star_.resize(grid_n);
  lc.dagger_.assign(grid_n, false);
  double scale = 0.0;
  for (std::size_t i = 0; i < grid_n; ++i) {
    const double s =
        i + 1 == grid_n ? se
                        : se * static_cast<double>(i) /
                              static_cast<double>(grid_n - 1);
    lc.grid_[i] = s;
    lc.mvc_[i] = max_velocity(cp, s);
    if (!(lc.mvc_[i] > 0.0)) {
      throw Error("MVC vanishes at s=" + std::to_string(s) +
                  ": path untraversable at rest");
    }
    lc.vlim_[i] = velocity_limit(cp, s);
    lc.mvc_star_[i] = std::min(lc.mvc_[i], lc.vlim_[i]);
    for (double v : {lc.mvc_[i], lc.vlim_[i]}) {
      if (std::isfinite(v)) scale = std::max(scale, v);
    }
  }
  lc.eps_v_ = 1e-9 * std::max(scale, 1.0);
  const double eps = lc.eps_v_;
  for (std::size_t i = 0; i < grid_n; ++i) {
    lc.dagger_[i] = lc.vlim_[i] < lc.mvc_[i] - eps;
  }
  // Edges of each run are refined by bisection on MVC - V - eps.
  auto edge = [&](double lo, double hi, bool lo_in) {
    for (int it = 0; it < 60 && hi - lo > 1e-12 * se; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (lc.on_dagger_at(mid) == lo_in) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  std::size_t i = 0;
  while (i < grid_n) {
    if (!lc.dagger_[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < grid_n && lc.dagger_[j + 1]) ++j;
    Interval iv;
    iv.begin = i == 0 ? 0.0 : edge(lc.grid_[i - 1], lc.grid_[i], false);
    iv.end = j + 1 == grid_n ? se : edge(lc.grid_[j], lc.grid_[j + 1], true);
    lc.segments_.push_back(iv);
    i = j + 1;
  }
  return lc;
}

}  // namespace topp_ni
