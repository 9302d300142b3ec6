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

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "wavecluster/analog.hpp"
#include "wavecluster/datasets.hpp"
#include "wavecluster/error.hpp"
#include "wavecluster/operators.hpp"
#include "wavecluster/random.hpp"
#include "wavecluster/wave.hpp"

using namespace wavecluster;
using testing::TestRng;

namespace {

AnalogConfig config(double rate, double eps) {
  AnalogConfig cfg;
  cfg.dc_loop_gain = rate;
  cfg.bandwidth_3db = 1.0;
  cfg.epsilon = eps;
  return cfg;
}

}  // namespace

TEST_CASE("split_nonnegative examples") {
  const Eigen::Matrix2d a{{1, -2}, {0, 3}};
  const SplitMatrix s = split_nonnegative(a);
  CHECK(s.a_plus == Eigen::Matrix2d{{1, 0}, {0, 3}});
  CHECK(s.a_minus == Eigen::Matrix2d{{0, 2}, {0, 0}});

  const Eigen::Matrix2d pos{{1, 2}, {0, 3}};
  CHECK(split_nonnegative(pos).a_minus.isZero(0.0));

  const auto l = build_operators(load_graph("0 1")).l_sym;
  const SplitMatrix ls = split_nonnegative(l);
  CHECK(ls.a_plus.isApprox(Eigen::Matrix2d::Identity()));
  CHECK(ls.a_minus.isApprox(Eigen::Matrix2d{{0, 1}, {1, 0}}));
}

TEST_CASE("split invariants") {
  TestRng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd a = rng.matrix(rng.integer(1, 9), rng.integer(1, 9), -1.0, 1.0);
    const SplitMatrix s = split_nonnegative(a);
    CHECK(s.a_plus - s.a_minus == a);
    CHECK(s.a_plus.cwiseProduct(s.a_minus).isZero(0.0));
    CHECK(s.a_plus.minCoeff() >= 0.0);
    CHECK(s.a_minus.minCoeff() >= 0.0);
  }
}

TEST_CASE("settle_mvm examples") {
  SUBCASE("identity") {
    const SettleResult r = settle_mvm(Eigen::Matrix2d::Identity(), Eigen::Vector2d(3, 4), config(10, 1e-6));
    CHECK((r.x - Eigen::Vector2d(3, 4)).cwiseAbs().maxCoeff() <= 1e-6 * (1 + 1e-9));
    CHECK(r.settle_time > 0.0);
  }
  SUBCASE("scalar closed form") {
    const AnalogConfig cfg = config(10, 1e-6);
    const SettleResult r = settle_mvm(Eigen::MatrixXd::Constant(1, 1, 2.0), Eigen::VectorXd::Ones(1), cfg);
    const double beta = 10.0 / 3.0;
    CHECK(r.x(0) == doctest::Approx(2.0 * (1.0 - std::exp(-beta * r.settle_time))).epsilon(1e-12));
    CHECK(std::abs(r.x(0) - 2.0) <= 1e-6 * (1 + 1e-9));
  }
  SUBCASE("random nonnegative 8x8 against the direct product") {
    TestRng rng(2);
    const AnalogConfig cfg;
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::MatrixXd a = rng.matrix(8, 8);
      const Eigen::VectorXd y = rng.vector(8, -1.0, 1.0);
      CHECK((settle_mvm(a, y, cfg).x - a * y).cwiseAbs().maxCoeff() <= cfg.epsilon * (1 + 1e-6));
    }
  }
}

TEST_CASE("settle_mvm input errors") {
  CHECK_THROWS_AS(settle_mvm(Eigen::Matrix2d::Identity(), Eigen::Vector2d(1, 1), config(10, 0.0)), InputError);
  CHECK_THROWS_AS(settle_mvm(Eigen::Matrix2d{{1, -1}, {0, 1}}, Eigen::Vector2d(1, 1), AnalogConfig{}), InputError);
  CHECK_THROWS_AS(settle_mvm(Eigen::Matrix2d::Identity(), Eigen::Vector3d(1, 1, 1), AnalogConfig{}), InputError);
  AnalogConfig bad_gain;
  bad_gain.dc_loop_gain = -1.0;
  CHECK_THROWS_AS(bad_gain.validate(), InputError);
}

TEST_CASE("convergence_time examples") {
  SUBCASE("already converged") {
    AnalogConfig cfg = config(10, 1e-6);
    const Eigen::Matrix2d a{{1, 2}, {3, 4}};
    const Eigen::Vector2d y(1, -1);
    cfg.x0 = a * y;
    const ConvergenceTimes t = convergence_time(a, y, cfg);
    CHECK(t.total == 0.0);
    CHECK(t.per_component.isZero(0.0));
  }
  SUBCASE("scalar case against the ODE crossing") {
    const double rate = 10.0;
    const Eigen::MatrixXd a = Eigen::MatrixXd::Constant(1, 1, 2.0);
    const Eigen::VectorXd y = Eigen::VectorXd::Ones(1);
    const ConvergenceTimes t = convergence_time(a, y, config(rate, 1e-3));
    const double beta = rate / 3.0;
    CHECK(t.total == doctest::Approx(std::log(2.0 / 1e-3) / beta).epsilon(1e-12));
    const double crossing = testing::ode_crossing_time(a, y, rate, 1e-3, 10.0 * t.total);
    CHECK(std::abs(t.total - crossing) <= 0.01 * crossing);
  }
  SUBCASE("doubling the rate halves every time") {
    TestRng rng(3);
    const Eigen::MatrixXd a = rng.matrix(6, 6);
    const Eigen::VectorXd y = rng.vector(6, -1.0, 1.0);
    const ConvergenceTimes slow = convergence_time(a, y, config(1e3, 1e-8));
    const ConvergenceTimes fast = convergence_time(a, y, config(2e3, 1e-8));
    CHECK((slow.per_component - 2.0 * fast.per_component).cwiseAbs().maxCoeff() < 1e-12 * slow.total);
    CHECK(slow.total == doctest::Approx(2.0 * fast.total));
  }
}

TEST_CASE("analytic settle time is the ODE crossing time") {
  TestRng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd a = rng.matrix(8, 8);
    const Eigen::VectorXd y = rng.vector(8, -1.0, 1.0);
    const double rate = 1e4;
    const ConvergenceTimes t = convergence_time(a, y, config(rate, 1e-8));
    const double crossing = testing::ode_crossing_time(a, y, rate, 1e-8, 2.0 * t.total);
    CAPTURE(trial);
    CHECK(std::abs(t.total - crossing) <= 0.01 * crossing);
    // Integrating to the analytic time leaves every component within eps.
    const SettleResult r = settle_mvm(a, y, config(rate, 1e-8));
    CHECK(r.settle_time == doctest::Approx(t.total));
    CHECK((r.x - a * y).cwiseAbs().maxCoeff() <= 1e-8 * (1 + 1e-6));
  }
}

TEST_CASE("analog_mvm examples") {
  const AnalogConfig cfg;
  const Eigen::Vector2d r1 = analog_mvm(Eigen::Matrix2d{{0, -1}, {-1, 0}}, Eigen::Vector2d(1, 2), cfg);
  CHECK((r1 - Eigen::Vector2d(-2, -1)).cwiseAbs().maxCoeff() <= 2 * cfg.epsilon);

  const auto l = build_operators(load_graph("0 1")).l_sym;
  const Eigen::Vector2d r2 = analog_mvm(l, Eigen::Vector2d(1, 0), cfg);
  CHECK((r2 - Eigen::Vector2d(1, -1)).cwiseAbs().maxCoeff() <= 2 * cfg.epsilon);

  const auto karate = build_operators(load_karate()).l_sym;
  const Eigen::VectorXd x = random_initial_state(34, 9);
  CHECK((analog_mvm(karate, x, cfg) - karate * x).cwiseAbs().maxCoeff() <= 2 * cfg.epsilon);
  const AnalogMvm bound(karate, cfg);
  CHECK((bound(x) - karate * x).cwiseAbs().maxCoeff() <= 2 * cfg.epsilon);
  CHECK(bound.apply(x).settle_time > 0.0);
}

TEST_CASE("analog and direct MVM give the same wave trajectory") {
  TestRng rng(6);
  MvmStrategy analog;
  analog.kind = MvmKind::analog;
  analog.analog.epsilon = 1e-10;
  for (int trial = 0; trial < 8; ++trial) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 40));
    std::vector<Edge> edges;
    for (const auto& e : testing::random_connected_edges(n, 0.2, rng)) edges.push_back({e.i, e.j, e.w});
    const GraphOperators ops = build_operators(Graph::create(n, edges));
    const Eigen::VectorXd u0 = random_initial_state(static_cast<Eigen::Index>(n), trial);
    const auto t_max = static_cast<Eigen::Index>(4 * n);
    const auto direct = simulate_discrete(ops, u0, t_max);
    const auto emulated = simulate_discrete(ops, u0, t_max, analog);
    CAPTURE(trial);
    CHECK((direct.samples - emulated.samples).cwiseAbs().maxCoeff() < 1e-6);
  }
}
