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

#include "wavecluster/analog.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "wavecluster/error.hpp"

namespace wavecluster {

void AnalogConfig::validate() const {
  if (!(dc_loop_gain > 0.0)) throw InputError("analog DC loop gain must be positive");
  if (!(bandwidth_3db > 0.0)) throw InputError("analog 3-dB bandwidth must be positive");
  if (!(epsilon > 0.0)) throw InputError("analog convergence threshold epsilon must be positive");
}

SplitMatrix split_nonnegative(const Eigen::MatrixXd& a) {
  return {a.cwiseMax(0.0), (-a).cwiseMax(0.0)};
}

namespace {

struct Coefficients {
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
  Eigen::VectorXd x0;
};

void check_nonnegative(const Eigen::MatrixXd& a) {
  if (!a.allFinite() || (a.array() < 0.0).any()) {
    throw InputError("conductance matrix must be finite and entrywise nonnegative");
  }
}

Eigen::VectorXd initial_state(const AnalogConfig& cfg, Eigen::Index rows) {
  if (cfg.x0.size() == 0) return Eigen::VectorXd::Zero(rows);
  if (cfg.x0.size() != rows) {
    throw InputError(fmt::format("analog initial state has {} entries, expected {}", cfg.x0.size(), rows));
  }
  return cfg.x0;
}

Eigen::VectorXd rates(const Eigen::MatrixXd& conductance, const AnalogConfig& cfg) {
  return cfg.rate() * (1.0 + conductance.rowwise().sum().array()).inverse();
}

Coefficients coefficients(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, const AnalogConfig& cfg) {
  cfg.validate();
  check_nonnegative(a);
  if (a.cols() != y.size()) {
    throw InputError(fmt::format("matrix has {} columns but input vector has {} entries", a.cols(), y.size()));
  }
  Coefficients c;
  c.beta = rates(a, cfg);
  c.alpha = c.beta.cwiseProduct(a * y);
  c.x0 = initial_state(cfg, a.rows());
  return c;
}

ConvergenceTimes times_from(const Coefficients& c, double epsilon) {
  ConvergenceTimes out;
  out.per_component.resize(c.beta.size());
  for (Eigen::Index j = 0; j < c.beta.size(); ++j) {
    const double gap = std::abs(c.x0(j) * c.beta(j) - c.alpha(j));
    const double t = std::log(gap / (c.beta(j) * epsilon)) / c.beta(j);
    // gap == 0 gives -inf; already converged components need no time.
    out.per_component(j) = std::isfinite(t) ? std::max(t, 0.0) : 0.0;
  }
  out.total = out.per_component.size() > 0 ? out.per_component.maxCoeff() : 0.0;
  return out;
}

Eigen::VectorXd state_at(const Coefficients& c, double t) {
  // x_j(t) = ((x0_j beta_j - alpha_j) exp(-beta_j t) + alpha_j) / beta_j
  const Eigen::ArrayXd decay = (-c.beta.array() * t).exp();
  return (((c.x0.array() * c.beta.array() - c.alpha.array()) * decay + c.alpha.array()) / c.beta.array())
      .matrix();
}

}  // namespace

ConvergenceTimes convergence_time(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, const AnalogConfig& cfg) {
  return times_from(coefficients(a, y, cfg), cfg.epsilon);
}

SettleResult settle_mvm(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, const AnalogConfig& cfg) {
  const Coefficients c = coefficients(a, y, cfg);
  const double t = times_from(c, cfg.epsilon).total;
  return {state_at(c, t), t};
}

Eigen::VectorXd analog_mvm(const Eigen::MatrixXd& a, const Eigen::VectorXd& x, const AnalogConfig& cfg) {
  return AnalogMvm(a, cfg)(x);
}

AnalogMvm::AnalogMvm(const Eigen::MatrixXd& a, AnalogConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (!a.allFinite()) throw InputError("analog MVM matrix has non-finite entries");
  SplitMatrix split = split_nonnegative(a);
  plus_.beta = rates(split.a_plus, cfg_);
  plus_.conductance = std::move(split.a_plus);
  minus_.beta = rates(split.a_minus, cfg_);
  minus_.conductance = std::move(split.a_minus);
}

SettleResult AnalogMvm::settle(const Array& array, const Eigen::VectorXd& y) const {
  Coefficients c;
  c.beta = array.beta;
  c.alpha = array.beta.cwiseProduct(array.conductance * y);
  c.x0 = initial_state(cfg_, array.conductance.rows());
  const double t = times_from(c, cfg_.epsilon).total;
  return {state_at(c, t), t};
}

SettleResult AnalogMvm::apply(const Eigen::VectorXd& x) const {
  if (x.size() != plus_.conductance.cols()) {
    throw InputError(fmt::format("analog MVM expects {} inputs, got {}", plus_.conductance.cols(), x.size()));
  }
  const SettleResult p = settle(plus_, x);
  const SettleResult m = settle(minus_, x);
  return {p.x - m.x, std::max(p.settle_time, m.settle_time)};
}

}  // namespace wavecluster
