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

#include <array>

#include "topp_ni/config.hpp"
#include "topp_ni/constraints.hpp"
#include "topp_ni/error.hpp"
#include "topp_ni/path.hpp"

namespace topp_ni::demo {

// Control points of the built-in unicycle path. Curvature has two interior
// extrema and one inflection.
inline constexpr std::array<Point2, 4> kControlPoints{
    Point2{0.0, 0.0}, Point2{2.0, 3.0}, Point2{5.0, -3.0}, Point2{8.0, 0.0}};

struct UnicycleBounds {
  std::array<double, 2> v_max;
  std::array<double, 2> a_max;
};

inline UnicycleBounds case_bounds(int which) {
  switch (which) {
    case 1: return {{0.5, 1.3}, {0.05, 0.1}};
    case 2: return {{0.2, 1.3}, {0.05, 0.1}};
    default: throw Error("demo case must be 1 or 2");
  }
}

inline PathSpec path(std::size_t samples = 201) {
  return to_path_spec(bezier_build(kControlPoints, samples));
}

inline ConstraintProfile constraints(int which, std::size_t samples = 201) {
  const auto b = case_bounds(which);
  return unicycle_constraints(path(samples), b.v_max, b.a_max);
}

inline InstanceConfig config(int which) {
  const auto b = case_bounds(which);
  InstanceConfig c;
  c.path = BezierPathConfig{kControlPoints, 201};
  c.constraints = UnicycleBoundsConfig{b.v_max, b.a_max};
  return c;
}

}  // namespace topp_ni::demo
