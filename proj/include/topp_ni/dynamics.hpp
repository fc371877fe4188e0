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

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "topp_ni/constraints.hpp"
#include "topp_ni/error.hpp"

namespace topp_ni {

// Robot model  M(xi) xi_dd + xi_d^T P(xi) xi_d + Q(xi) <= 0  along a path
// xi(s). `quadratic` returns the m slices P(:, i, :) of the n x m x n tensor,
// each an n x n matrix.
struct GeneralizedDynamics {
  std::size_t dof = 0;   // n
  std::size_t rows = 0;  // m
  double length = 0.0;
  std::function<Eigen::VectorXd(double)> state;
  std::function<Eigen::VectorXd(double)> state_s;
  std::function<Eigen::VectorXd(double)> state_ss;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> inertia;
  std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)> quadratic;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> bias;
};

class DynamicsModel final : public ConstraintModel {
 public:
  explicit DynamicsModel(GeneralizedDynamics dyn) : dyn_(std::move(dyn)) {
    if (dyn_.dof == 0 || dyn_.rows == 0) {
      throw Error("dynamics: dof and row count must be positive");
    }
    if (!(dyn_.length > 0.0)) throw Error("dynamics: length must be positive");
    if (!dyn_.state || !dyn_.state_s || !dyn_.state_ss || !dyn_.inertia ||
        !dyn_.quadratic || !dyn_.bias) {
      throw Error("dynamics: every map must be provided");
    }
    std::vector<AccelRow> probe(dyn_.rows);
    accel_rows(0.0, probe);
  }

  double length() const override { return dyn_.length; }
  std::size_t accel_row_count() const override { return dyn_.rows; }
  std::size_t velocity_row_count() const override { return 0; }

  // A = M xi_s,  B = M xi_ss + xi_s^T P xi_s,  C = Q.
  void accel_rows(double s, std::span<AccelRow> out) const override {
    const std::size_t n = dyn_.dof;
    const std::size_t m = dyn_.rows;
    const Eigen::VectorXd xi = dyn_.state(s);
    const Eigen::VectorXd xi_s = dyn_.state_s(s);
    const Eigen::VectorXd xi_ss = dyn_.state_ss(s);
    check(xi.size() == static_cast<Eigen::Index>(n) &&
              xi_s.size() == static_cast<Eigen::Index>(n) &&
              xi_ss.size() == static_cast<Eigen::Index>(n),
          "state vectors must have dof entries");
    const Eigen::MatrixXd mass = dyn_.inertia(xi);
    check(mass.rows() == static_cast<Eigen::Index>(m) &&
              mass.cols() == static_cast<Eigen::Index>(n),
          "inertia must be rows x dof");
    const auto slices = dyn_.quadratic(xi);
    check(slices.size() == m, "quadratic tensor must have one slice per row");
    const Eigen::VectorXd q = dyn_.bias(xi);
    check(q.size() == static_cast<Eigen::Index>(m), "bias must have rows entries");
    const Eigen::VectorXd a = mass * xi_s;
    const Eigen::VectorXd b0 = mass * xi_ss;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& p = slices[i];
      check(p.rows() == static_cast<Eigen::Index>(n) &&
                p.cols() == static_cast<Eigen::Index>(n),
            "quadratic slices must be dof x dof");
      const auto ei = static_cast<Eigen::Index>(i);
      out[i] = {a(ei), b0(ei) + xi_s.dot(p * xi_s), q(ei)};
    }
  }

  void velocity_rows(double, std::span<VelocityRow>) const override {}

 private:
  static void check(bool ok, const char* what) {
    if (!ok) throw Error(std::string("dynamics dimension mismatch: ") + what);
  }

  GeneralizedDynamics dyn_;
};

inline ConstraintProfile from_generalized_dynamics(GeneralizedDynamics dyn) {
  return ConstraintProfile(std::make_shared<const DynamicsModel>(std::move(dyn)));
}

}  // namespace topp_ni
