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
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "topp_ni/error.hpp"

namespace topp_ni {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

namespace detail {

// 5-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
    0.9061798459386640};
inline constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
    0.4786286704993665, 0.2369268850561891};

template <class F>
double gauss_legendre5(F&& f, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
    sum += kGaussWeights[i] * f(mid + half * kGaussNodes[i]);
  }
  return sum * half;
}

inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

}  // namespace detail

// Planar cubic Bezier curve with a tabulated arc-length map.
//
// The table holds s(lambda) at uniformly spaced lambda nodes, each entry
// integrated with a 5-point Gauss-Legendre rule over its sub-interval. The
// inverse map s -> lambda starts from a monotone cubic Hermite interpolant
// of the table and is polished with Newton steps on the quadrature, which
// keeps round trips at machine-precision level.
class BezierPath {
 public:
  static constexpr std::size_t kDefaultSamples = 201;

  // Fails with "zero-length path" when every control point coincides.
  static BezierPath build(const std::array<Point2, 4>& control_points,
                          std::size_t samples = kDefaultSamples) {
    if (samples < 2) {
      throw Error("bezier_build: samples must be >= 2");
    }
    for (const auto& p : control_points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw Error("bezier_build: control points must be finite");
      }
    }
    BezierPath path;
    path.points_ = control_points;
    const std::size_t n = samples;
    path.lambda_.resize(n);
    path.s_.resize(n);
    path.dlambda_ds_.resize(n);
    path.s_[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      path.lambda_[k] = static_cast<double>(k) / static_cast<double>(n - 1);
    }
    path.lambda_.back() = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
      path.s_[k] = path.s_[k - 1] +
                   detail::gauss_legendre5(
                       [&](double l) { return path.speed(l); },
                       path.lambda_[k - 1], path.lambda_[k]);
    }
    double scale = 0.0;
    for (const auto& p : control_points) {
      scale = std::max({scale, std::abs(p.x - control_points[0].x),
                        std::abs(p.y - control_points[0].y)});
    }
    if (scale == 0.0 || path.s_.back() <= 1e-12 * std::max(1.0, scale)) {
      throw Error("zero-length path");
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double v = path.speed(path.lambda_[k]);
      if (!(v > 1e-12 * path.s_.back())) {
        throw Error("bezier_build: singular parameterization (zero speed)");
      }
      path.dlambda_ds_[k] = 1.0 / v;
    }
    for (std::size_t k = 1; k < n; ++k) {
      if (!(path.s_[k] > path.s_[k - 1])) {
        throw Error("bezier_build: arc table is not strictly increasing");
      }
    }
    return path;
  }

  const std::array<Point2, 4>& control_points() const { return points_; }
  double length() const { return s_.back(); }
  std::span<const double> lambda_table() const { return lambda_; }
  std::span<const double> s_table() const { return s_; }

  Point2 position(double l) const {
    const double u = 1.0 - l;
    const double b0 = u * u * u;
    const double b1 = 3.0 * u * u * l;
    const double b2 = 3.0 * (l * l - l * l * l);
    const double b3 = l * l * l;
    const auto& p = points_;
    return {b0 * p[0].x + b1 * p[1].x + b2 * p[2].x + b3 * p[3].x,
            b0 * p[0].y + b1 * p[1].y + b2 * p[2].y + b3 * p[3].y};
  }

  Point2 first_derivative(double l) const {
    const double u = 1.0 - l;
    const auto& p = points_;
    const double c0 = 3.0 * u * u;
    const double c1 = 6.0 * u * l;
    const double c2 = 3.0 * l * l;
    return {c0 * (p[1].x - p[0].x) + c1 * (p[2].x - p[1].x) +
                c2 * (p[3].x - p[2].x),
            c0 * (p[1].y - p[0].y) + c1 * (p[2].y - p[1].y) +
                c2 * (p[3].y - p[2].y)};
  }

  Point2 second_derivative(double l) const {
    const double u = 1.0 - l;
    const auto& p = points_;
    return {6.0 * u * (p[2].x - 2.0 * p[1].x + p[0].x) +
                6.0 * l * (p[3].x - 2.0 * p[2].x + p[1].x),
            6.0 * u * (p[2].y - 2.0 * p[1].y + p[0].y) +
                6.0 * l * (p[3].y - 2.0 * p[2].y + p[1].y)};
  }

  Point2 third_derivative() const {
    const auto& p = points_;
    return {6.0 * (p[3].x - 3.0 * p[2].x + 3.0 * p[1].x - p[0].x),
            6.0 * (p[3].y - 3.0 * p[2].y + 3.0 * p[1].y - p[0].y)};
  }

  double speed(double l) const { return detail::norm(first_derivative(l)); }

  // Signed curvature, positive for counter-clockwise turning.
  double curvature_at_lambda(double l) const {
    const Point2 d1 = first_derivative(l);
    const double v = detail::norm(d1);
    return detail::cross(d1, second_derivative(l)) / (v * v * v);
  }

  // d(kappa)/ds at parameter l, from the analytic third derivative.
  double curvature_rate_at_lambda(double l) const {
    const Point2 d1 = first_derivative(l);
    const Point2 d2 = second_derivative(l);
    const double v = detail::norm(d1);
    const double c = detail::cross(d1, d2);
    const double dc = detail::cross(d1, third_derivative());
    const double dv = detail::dot(d1, d2) / v;
    const double dkappa_dl = (dc * v - 3.0 * c * dv) / (v * v * v * v);
    return dkappa_dl / v;
  }

  double arc_length(double l) const {
    l = std::clamp(l, 0.0, 1.0);
    const std::size_t k = interval_of_lambda(l);
    return s_[k] + detail::gauss_legendre5([&](double x) { return speed(x); },
                                           lambda_[k], l);
  }

  double lambda_at(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= length()) return 1.0;
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - s_.begin()) - 1;
    const double h = s_[k + 1] - s_[k];
    const double dl = lambda_[k + 1] - lambda_[k];
    // Fritsch-Carlson limited Hermite slopes keep the initial guess monotone.
    const double secant = dl / h;
    const double m0 = std::min(dlambda_ds_[k], 3.0 * secant);
    const double m1 = std::min(dlambda_ds_[k + 1], 3.0 * secant);
    const double t = (s - s_[k]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    double l = (2 * t3 - 3 * t2 + 1) * lambda_[k] + (t3 - 2 * t2 + t) * h * m0 +
               (-2 * t3 + 3 * t2) * lambda_[k + 1] + (t3 - t2) * h * m1;
    l = std::clamp(l, lambda_[k], lambda_[k + 1]);
    for (int iter = 0; iter < 3; ++iter) {
      const double r =
          s_[k] +
          detail::gauss_legendre5([&](double x) { return speed(x); },
                                  lambda_[k], l) -
          s;
      l = std::clamp(l - r / speed(l), lambda_[k], lambda_[k + 1]);
      if (std::abs(r) < 1e-15 * length()) break;
    }
    return l;
  }

 private:
  BezierPath() = default;

  std::size_t interval_of_lambda(double l) const {
    const std::size_t n = lambda_.size();
    auto k = static_cast<std::size_t>(l * static_cast<double>(n - 1));
    return std::min(k, n - 2);
  }

  std::array<Point2, 4> points_{};
  std::vector<double> lambda_;
  std::vector<double> s_;
  std::vector<double> dlambda_ds_;
};

// Bezier construction as a free function, mirroring the other builders.
inline BezierPath bezier_build(const std::array<Point2, 4>& control_points,
                               std::size_t samples = BezierPath::kDefaultSamples) {
  return BezierPath::build(control_points, samples);
}

struct CurvatureSample {
  double kappa = 0.0;
  double kappa_s = 0.0;
};

// Arc-length parameterized planar path, reduced to what the unicycle model
// needs: total length, curvature and its arc-length derivative.
class PathSpec {
 public:
  using Evaluator = std::function<CurvatureSample(double)>;

  PathSpec(double length, Evaluator evaluator, std::string description = {})
      : length_(length),
        evaluator_(std::move(evaluator)),
        description_(std::move(description)) {
    if (!(length_ > 0.0) || !std::isfinite(length_)) {
      throw Error("PathSpec: length must be positive and finite");
    }
  }

  static PathSpec line(double length) {
    return PathSpec(
        length, [](double) { return CurvatureSample{0.0, 0.0}; }, "line");
  }

  // Counter-clockwise arc of the given radius.
  static PathSpec circle(double radius, double length) {
    if (!(radius > 0.0)) throw Error("circle: radius must be positive");
    const double kappa = 1.0 / radius;
    return PathSpec(
        length, [kappa](double) { return CurvatureSample{kappa, 0.0}; },
        "circle");
  }

  // Curvature linear in s, crossing zero at `zero_at`.
  static PathSpec clothoid(double length, double rate, double zero_at) {
    return PathSpec(
        length,
        [rate, zero_at](double s) {
          return CurvatureSample{rate * (s - zero_at), rate};
        },
        "clothoid");
  }

  double length() const { return length_; }
  const std::string& description() const { return description_; }

  CurvatureSample at(double s) const {
    return evaluator_(std::clamp(s, 0.0, length_));
  }
  double curvature(double s) const { return at(s).kappa; }
  double curvature_rate(double s) const { return at(s).kappa_s; }

 private:
  double length_;
  Evaluator evaluator_;
  std::string description_;
};

inline PathSpec to_path_spec(const BezierPath& path) {
  auto shared = std::make_shared<const BezierPath>(path);
  return PathSpec(
      shared->length(),
      [shared](double s) {
        const double l = shared->lambda_at(s);
        return CurvatureSample{shared->curvature_at_lambda(l),
                               shared->curvature_rate_at_lambda(l)};
      },
      "bezier");
}

}  // namespace topp_ni
