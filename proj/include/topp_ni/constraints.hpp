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
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "topp_ni/error.hpp"
#include "topp_ni/path.hpp"

namespace topp_ni {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// One acceleration/torque inequality  a * sdd + b * sd^2 + c <= 0.
struct AccelRow {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

// One velocity inequality  a * sd + d <= 0.
struct VelocityRow {
  double a = 0.0;
  double d = 0.0;
};

template <class Row>
class RowBuffer : public boost::container::small_vector<Row, 8> {
 public:
  using boost::container::small_vector<Row, 8>::small_vector;

  operator std::span<Row>() { return {this->data(), this->size()}; }
  operator std::span<const Row>() const { return {this->data(), this->size()}; }
};

// Source of the inequality rows along a path of fixed length. Implementations
// must be immutable and reentrant.
class ConstraintModel {
 public:
  virtual ~ConstraintModel() = default;
  virtual double length() const = 0;
  virtual std::size_t accel_row_count() const = 0;
  virtual std::size_t velocity_row_count() const = 0;
  virtual void accel_rows(double s, std::span<AccelRow> out) const = 0;
  virtual void velocity_rows(double s, std::span<VelocityRow> out) const = 0;
};

// Handle to the rows A(s), B(s), C(s) and A(s), D(s) along a path. Cheap to
// copy; the model is shared and never mutated.
class ConstraintProfile {
 public:
  explicit ConstraintProfile(std::shared_ptr<const ConstraintModel> model)
      : model_(std::move(model)) {
    if (!model_) throw Error("ConstraintProfile: null model");
  }

  double length() const { return model_->length(); }
  std::size_t accel_row_count() const { return model_->accel_row_count(); }
  std::size_t velocity_row_count() const {
    return velocity_enabled_ ? model_->velocity_row_count() : 0;
  }
  bool has_velocity_rows() const { return velocity_row_count() > 0; }

  RowBuffer<AccelRow> accel_at(double s) const {
    RowBuffer<AccelRow> rows(model_->accel_row_count());
    model_->accel_rows(std::clamp(s, 0.0, length()), rows);
    return rows;
  }

  RowBuffer<VelocityRow> velocity_at(double s) const {
    RowBuffer<VelocityRow> rows(velocity_row_count());
    if (!rows.empty()) model_->velocity_rows(std::clamp(s, 0.0, length()), rows);
    return rows;
  }

  // Same acceleration rows with the velocity rows dropped; used to plan the
  // torque-only trajectory.
  ConstraintProfile without_velocity_rows() const {
    ConstraintProfile copy = *this;
    copy.velocity_enabled_ = false;
    return copy;
  }

  const ConstraintModel& model() const { return *model_; }

 private:
  std::shared_ptr<const ConstraintModel> model_;
  bool velocity_enabled_ = true;
};

struct AccelBounds {
  double alpha = -kInfinity;
  double beta = kInfinity;
};

// Row-level evaluation of the extremal path accelerations. Rows with a == 0
// do not contribute to either bound.
inline double alpha_of_rows(std::span<const AccelRow> rows, double sdot) {
  const double z = sdot * sdot;
  double best = -kInfinity;
  bool any = false;
  for (const auto& r : rows) {
    if (r.a < 0.0) {
      best = std::max(best, (-r.b * z - r.c) / r.a);
      any = true;
    }
  }
  if (!any) throw Error("alpha undefined (zero-inertia)");
  return best;
}

inline double beta_of_rows(std::span<const AccelRow> rows, double sdot) {
  const double z = sdot * sdot;
  double best = kInfinity;
  bool any = false;
  for (const auto& r : rows) {
    if (r.a > 0.0) {
      best = std::min(best, (-r.b * z - r.c) / r.a);
      any = true;
    }
  }
  if (!any) throw Error("beta undefined (zero-inertia)");
  return best;
}

inline double alpha(const ConstraintProfile& cp, double s, double sdot) {
  return alpha_of_rows(cp.accel_at(s), sdot);
}

inline double beta(const ConstraintProfile& cp, double s, double sdot) {
  return beta_of_rows(cp.accel_at(s), sdot);
}

inline AccelBounds accel_bounds(const ConstraintProfile& cp, double s,
                                double sdot) {
  const auto rows = cp.accel_at(s);
  return {alpha_of_rows(rows, sdot), beta_of_rows(rows, sdot)};
}

// Largest sdot >= 0 satisfying every velocity row; +inf when unconstrained.
inline double velocity_limit_of_rows(std::span<const VelocityRow> rows,
                                     double s = 0.0) {
  double cap = kInfinity;
  for (const auto& r : rows) {
    if (r.a > 0.0) {
      if (r.d > 0.0) {
        throw Error("velocity-infeasible path point at s=" + std::to_string(s));
      }
      cap = std::min(cap, -r.d / r.a);
    } else if (r.d > 0.0) {
      // a <= 0 and d > 0: violated at sdot = 0.
      throw Error("velocity-infeasible path point at s=" + std::to_string(s));
    }
  }
  return cap;
}

inline double velocity_limit(const ConstraintProfile& cp, double s) {
  return velocity_limit_of_rows(cp.velocity_at(s), s);
}

// Smallest sdot at which alpha meets beta, from the closed-form crossing of
// every (positive-a, negative-a) row pair plus the direct caps of rows with
// a == 0. Returns +inf when no pair ever conflicts and 0 when the rows
// already conflict at rest.
inline double max_velocity_of_rows(std::span<const AccelRow> rows) {
  double zcap = kInfinity;
  for (const auto& ri : rows) {
    if (ri.a > 0.0) {
      for (const auto& rj : rows) {
        if (!(rj.a < 0.0)) continue;
        // beta_i(z) - alpha_j(z) = p + q z
        const double p = -ri.c / ri.a + rj.c / rj.a;
        const double q = -ri.b / ri.a + rj.b / rj.a;
        if (p <= 0.0) {
          zcap = 0.0;
        } else if (q < 0.0) {
          zcap = std::min(zcap, -p / q);
        }
      }
    } else if (ri.a == 0.0) {
      if (ri.b > 0.0) {
        zcap = std::min(zcap, std::max(0.0, -ri.c / ri.b));
      } else if (ri.c > 0.0) {
        zcap = 0.0;
      }
    }
  }
  return std::sqrt(zcap);
}

inline double max_velocity(const ConstraintProfile& cp, double s) {
  return max_velocity_of_rows(cp.accel_at(s));
}

// Unicycle rows: with M(s) = [kappa, 1] and M_s(s) = [kappa_s, 0],
//   A = [M; -M], B = [M_s; -M_s], C = -[a_max; a_max], D = -[v_max; v_max].
class UnicycleModel final : public ConstraintModel {
 public:
  UnicycleModel(PathSpec path, std::array<double, 2> v_max,
                std::array<double, 2> a_max)
      : path_(std::move(path)), v_max_(v_max), a_max_(a_max) {
    for (double v : v_max_) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error("unicycle: v_max must be strictly positive");
      }
    }
    for (double a : a_max_) {
      if (!(a > 0.0) || !std::isfinite(a)) {
        throw Error("unicycle: a_max must be strictly positive");
      }
    }
  }

  double length() const override { return path_.length(); }
  std::size_t accel_row_count() const override { return 4; }
  std::size_t velocity_row_count() const override { return 4; }

  void accel_rows(double s, std::span<AccelRow> out) const override {
    const auto k = path_.at(s);
    out[0] = {k.kappa, k.kappa_s, -a_max_[0]};
    out[1] = {1.0, 0.0, -a_max_[1]};
    out[2] = {-k.kappa, -k.kappa_s, -a_max_[0]};
    out[3] = {-1.0, 0.0, -a_max_[1]};
  }

  void velocity_rows(double s, std::span<VelocityRow> out) const override {
    const double kappa = path_.curvature(s);
    out[0] = {kappa, -v_max_[0]};
    out[1] = {1.0, -v_max_[1]};
    out[2] = {-kappa, -v_max_[0]};
    out[3] = {-1.0, -v_max_[1]};
  }

  const PathSpec& path() const { return path_; }
  std::array<double, 2> v_max() const { return v_max_; }
  std::array<double, 2> a_max() const { return a_max_; }

 private:
  PathSpec path_;
  std::array<double, 2> v_max_;
  std::array<double, 2> a_max_;
};

// v_max = (angular rad/s, linear m/s), a_max = (rad/s^2, m/s^2).
inline ConstraintProfile unicycle_constraints(const PathSpec& path,
                                              std::array<double, 2> v_max,
                                              std::array<double, 2> a_max) {
  return ConstraintProfile(
      std::make_shared<const UnicycleModel>(path, v_max, a_max));
}

// Rows tabulated on an increasing s grid, linearly interpolated in between.
class TabulatedModel final : public ConstraintModel {
 public:
  TabulatedModel(std::vector<double> grid,
                 std::vector<std::vector<AccelRow>> accel,
                 std::vector<std::vector<VelocityRow>> velocity = {})
      : grid_(std::move(grid)),
        accel_(std::move(accel)),
        velocity_(std::move(velocity)) {
    if (grid_.size() < 2) throw Error("tabulated: need at least 2 grid points");
    if (grid_.front() != 0.0) throw Error("tabulated: grid must start at 0");
    for (std::size_t i = 1; i < grid_.size(); ++i) {
      if (!(grid_[i] > grid_[i - 1])) {
        throw Error("tabulated: grid must be strictly increasing");
      }
    }
    if (accel_.size() != grid_.size()) {
      throw Error("tabulated: accel rows must match grid size");
    }
    accel_count_ = accel_.front().size();
    if (accel_count_ == 0) throw Error("tabulated: no acceleration rows");
    for (const auto& r : accel_) {
      if (r.size() != accel_count_) throw Error("tabulated: ragged accel rows");
    }
    if (!velocity_.empty()) {
      if (velocity_.size() != grid_.size()) {
        throw Error("tabulated: velocity rows must match grid size");
      }
      velocity_count_ = velocity_.front().size();
      for (const auto& r : velocity_) {
        if (r.size() != velocity_count_) {
          throw Error("tabulated: ragged velocity rows");
        }
      }
    }
  }

  double length() const override { return grid_.back(); }
  std::size_t accel_row_count() const override { return accel_count_; }
  std::size_t velocity_row_count() const override { return velocity_count_; }

  void accel_rows(double s, std::span<AccelRow> out) const override {
    const auto [k, t] = locate(s);
    for (std::size_t i = 0; i < accel_count_; ++i) {
      const auto& lo = accel_[k][i];
      const auto& hi = accel_[k + 1][i];
      out[i] = {lo.a + t * (hi.a - lo.a), lo.b + t * (hi.b - lo.b),
                lo.c + t * (hi.c - lo.c)};
    }
  }

  void velocity_rows(double s, std::span<VelocityRow> out) const override {
    if (velocity_count_ == 0) return;
    const auto [k, t] = locate(s);
    for (std::size_t i = 0; i < velocity_count_; ++i) {
      const auto& lo = velocity_[k][i];
      const auto& hi = velocity_[k + 1][i];
      out[i] = {lo.a + t * (hi.a - lo.a), lo.d + t * (hi.d - lo.d)};
    }
  }

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<std::vector<AccelRow>>& accel_table() const {
    return accel_;
  }
  const std::vector<std::vector<VelocityRow>>& velocity_table() const {
    return velocity_;
  }

 private:
  std::pair<std::size_t, double> locate(double s) const {
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), s);
    std::size_t k = it == grid_.begin()
                        ? 0
                        : static_cast<std::size_t>(it - grid_.begin()) - 1;
    k = std::min(k, grid_.size() - 2);
    const double t =
        std::clamp((s - grid_[k]) / (grid_[k + 1] - grid_[k]), 0.0, 1.0);
    return {k, t};
  }

  std::vector<double> grid_;
  std::vector<std::vector<AccelRow>> accel_;
  std::vector<std::vector<VelocityRow>> velocity_;
  std::size_t accel_count_ = 0;
  std::size_t velocity_count_ = 0;
};

inline ConstraintProfile tabulated_constraints(
    std::vector<double> grid, std::vector<std::vector<AccelRow>> accel,
    std::vector<std::vector<VelocityRow>> velocity = {}) {
  return ConstraintProfile(std::make_shared<const TabulatedModel>(
      std::move(grid), std::move(accel), std::move(velocity)));
}

}  // namespace topp_ni
