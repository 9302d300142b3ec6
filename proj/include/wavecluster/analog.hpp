// Copyright 2026 The wavecluster Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

namespace wavecluster {

/// Parameters of a crosspoint-array MVM circuit with negative feedback.
///
/// Each output settles as dx_j/dt = alpha_j - beta_j x_j with
///   alpha_j = gain * bandwidth * (A y)_j / (1 + sum_i A_ji)
///   beta_j  = gain * bandwidth / (1 + sum_i A_ji)
/// so the fixed point alpha_j / beta_j is (A y)_j.
struct AnalogConfig {
  double dc_loop_gain = 1e2;
  double bandwidth_3db = 1e2;
  double epsilon = 1e-8;
  /// Initial output state; empty means zero.
  Eigen::VectorXd x0;

  double rate() const { return dc_loop_gain * bandwidth_3db; }
  void validate() const;
};

/// A = a_plus - a_minus with both parts nonnegative and disjoint supports.
struct SplitMatrix {
  Eigen::MatrixXd a_plus;
  Eigen::MatrixXd a_minus;
};

SplitMatrix split_nonnegative(const Eigen::MatrixXd& a);

struct SettleResult {
  Eigen::VectorXd x;
  double settle_time = 0.0;
};

struct ConvergenceTimes {
  Eigen::VectorXd per_component;  // T_j, clipped at 0
  double total = 0.0;             // max_j T_j
};

/// Per-component settling times
///   T_j = ln(|x0_j beta_j - alpha_j| / (beta_j eps)) / beta_j,
/// i.e. the first time |x_j(t) - (A y)_j| drops to eps.
ConvergenceTimes convergence_time(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, const AnalogConfig& cfg);

/// Closed-form circuit state at the convergence time: every component
/// is within eps of (A y)_j. `a` must be entrywise nonnegative.
SettleResult settle_mvm(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, const AnalogConfig& cfg);

/// Signed MVM via two settled nonnegative arrays; within 2 eps of A x.
Eigen::VectorXd analog_mvm(const Eigen::MatrixXd& a, const Eigen::VectorXd& x, const AnalogConfig& cfg);

/// analog_mvm with the split and the row conductance sums computed once,
/// for repeated products with the same matrix.
class AnalogMvm {
 public:
  AnalogMvm(const Eigen::MatrixXd& a, AnalogConfig cfg);

  /// settle_time is that of the slower of the two arrays.
  SettleResult apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return apply(x).x; }

 private:
  struct Array {
    Eigen::MatrixXd conductance;
    Eigen::VectorXd beta;
  };
  SettleResult settle(const Array& array, const Eigen::VectorXd& y) const;

  AnalogConfig cfg_;
  Array plus_;
  Array minus_;
};

}  // namespace wavecluster
