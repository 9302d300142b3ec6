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

#include "wavecluster/wave.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "wavecluster/error.hpp"

namespace wavecluster {

namespace {

constexpr Eigen::Index kFiniteCheckInterval = 64;

using Complex = std::complex<double>;

void check_inputs(const GraphOperators& ops, const Eigen::VectorXd& u0, Eigen::Index t_max) {
  const double c = ops.wave_speed_c;
  if (!(c > 0.0 && c < kMaxWaveSpeed)) {
    throw InputError(fmt::format("wave speed c = {} outside the stable interval (0, sqrt 2)", c));
  }
  if (u0.size() != ops.n_nodes()) {
    throw InputError(fmt::format("initial state has {} entries, graph has {} nodes", u0.size(), ops.n_nodes()));
  }
  if (!u0.allFinite()) throw InputError("initial state has non-finite entries");
  if (t_max < 2) throw InputError(fmt::format("t_max = {} must be at least 2", t_max));
}

WaveTrajectory make_trajectory(const GraphOperators& ops, const Eigen::VectorXd& u0, Eigen::Index t_max,
                               Backend backend) {
  WaveTrajectory traj;
  traj.samples.resize(u0.size(), t_max);
  traj.wave_speed_c = ops.wave_speed_c;
  traj.backend = backend;
  traj.initial = u0;
  return traj;
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> decompose(const Eigen::MatrixXd& l_sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l_sym);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition of l_sym failed");
  return solver;
}

}  // namespace

std::string to_string(Backend b) {
  switch (b) {
    case Backend::discrete:
      return "discrete";
    case Backend::schrodinger:
      return "schrodinger";
    case Backend::closed_form:
      return "closed-form";
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  if (name == "discrete") return Backend::discrete;
  if (name == "schrodinger") return Backend::schrodinger;
  if (name == "closed-form" || name == "closed_form") return Backend::closed_form;
  throw InputError(fmt::format("unknown backend '{}'", name));
}

std::string to_string(MvmKind k) { return k == MvmKind::direct ? "direct" : "analog"; }

MvmKind parse_mvm(std::string_view name) {
  if (name == "direct") return MvmKind::direct;
  if (name == "analog") return MvmKind::analog;
  throw InputError(fmt::format("unknown MVM strategy '{}'", name));
}

MatVec bind_mvm(const Eigen::MatrixXd& a, const MvmStrategy& strategy) {
  if (strategy.kind == MvmKind::analog) {
    return [mvm = AnalogMvm(a, strategy.analog)](const Eigen::VectorXd& x) { return mvm(x); };
  }
  return [a](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a * x; };
}

WaveTrajectory simulate_discrete(const GraphOperators& ops, const Eigen::VectorXd& u0, Eigen::Index t_max,
                                 const MvmStrategy& mvm) {
  return simulate_discrete(ops, u0, t_max, bind_mvm(ops.l_sym, mvm));
}

WaveTrajectory simulate_discrete(const GraphOperators& ops, const Eigen::VectorXd& u0, Eigen::Index t_max,
                                 const MatVec& apply_l_sym) {
  check_inputs(ops, u0, t_max);
  WaveTrajectory traj = make_trajectory(ops, u0, t_max, Backend::discrete);
  const double c2 = ops.wave_speed_c * ops.wave_speed_c;

  Eigen::VectorXd prev = u0;
  Eigen::VectorXd cur = u0;
  traj.samples.col(0) = u0;
  for (Eigen::Index t = 1; t < t_max; ++t) {
    Eigen::VectorXd next = 2.0 * cur - prev - c2 * apply_l_sym(cur);
    prev = std::move(cur);
    cur = std::move(next);
    traj.samples.col(t) = cur;
    if ((t % kFiniteCheckInterval == 0 || t == t_max - 1) && !cur.allFinite()) {
      throw NumericalError(fmt::format("discrete wave iteration became non-finite by step {}", t));
    }
  }
  return traj;
}

WaveTrajectory closed_form_wave(const GraphOperators& ops, const Eigen::VectorXd& u0, Eigen::Index t_max) {
  check_inputs(ops, u0, t_max);
  WaveTrajectory traj = make_trajectory(ops, u0, t_max, Backend::closed_form);
  const auto solver = decompose(ops.l_sym);
  const Eigen::MatrixXd& v = solver.eigenvectors();
  const Eigen::VectorXd proj = v.transpose() * u0;
  const double c2 = ops.wave_speed_c * ops.wave_speed_c;
  const Eigen::Index n = u0.size();

  Eigen::VectorXd zeta(n);
  Eigen::VectorXcd p(n);
  Eigen::VectorXcd q(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    zeta(j) = std::acos(std::clamp(1.0 - c2 * solver.eigenvalues()(j) / 2.0, -1.0, 1.0));
    const double tan_half = std::tan(zeta(j) / 2.0);
    p(j) = Complex(1.0, tan_half) / 2.0;
    q(j) = Complex(1.0, -tan_half) / 2.0;
  }

  const double scale = std::max(1.0, u0.norm());
  Eigen::VectorXcd weights(n);
  for (Eigen::Index t = 0; t < t_max; ++t) {
    const double td = static_cast<double>(t);
    for (Eigen::Index j = 0; j < n; ++j) {
      weights(j) = proj(j) * (p(j) * std::polar(1.0, td * zeta(j)) + q(j) * std::polar(1.0, -td * zeta(j)));
    }
    const Eigen::VectorXcd u = v.cast<Complex>() * weights;
    if (u.imag().cwiseAbs().maxCoeff() > 1e-9 * scale) {
      throw NumericalError(fmt::format("closed-form wave sample at t = {} is not real", t));
    }
    traj.samples.col(t) = u.real();
  }
  traj.samples.col(0) = u0;
  return traj;
}

namespace {

using OdeState = std::vector<Complex>;

struct SchrodingerRhs {
  const Eigen::MatrixXcd* b;
  const Eigen::MatrixXcd* bt;
  double c;

  void operator()(const OdeState& x, OdeState& dxdt, double /*t*/) const {
    const Eigen::Index n = b->rows();
    const Eigen::Index m = b->cols();
    Eigen::Map<const Eigen::VectorXcd> u1(x.data(), n);
    Eigen::Map<const Eigen::VectorXcd> u2(x.data() + n, m);
    Eigen::Map<Eigen::VectorXcd> d1(dxdt.data(), n);
    Eigen::Map<Eigen::VectorXcd> d2(dxdt.data() + n, m);
    const Complex minus_ic(0.0, -c);
    d1.noalias() = minus_ic * (*b * u2);
    d2.noalias() = minus_ic * (*bt * u1);
  }
};

OdeState pack(const SchrodingerState& s) {
  OdeState x(static_cast<std::size_t>(s.u1.size() + s.u2.size()));
  std::copy(s.u1.begin(), s.u1.end(), x.begin());
  std::copy(s.u2.begin(), s.u2.end(), x.begin() + s.u1.size());
  return x;
}

SchrodingerState unpack(const OdeState& x, Eigen::Index n, double time) {
  SchrodingerState s;
  s.u1 = Eigen::Map<const Eigen::VectorXcd>(x.data(), n);
  s.u2 = Eigen::Map<const Eigen::VectorXcd>(x.data() + n, static_cast<Eigen::Index>(x.size()) - n);
  s.time = time;
  return s;
}

void check_state(const GraphOperators& ops, const SchrodingerState& s) {
  if (s.u1.size() != ops.n_nodes() || s.u2.size() != ops.n_edges()) {
    throw InputError(fmt::format("Schrodinger state must have {} node and {} edge entries", ops.n_nodes(),
                                 ops.n_edges()));
  }
}

template <typename Observer>
void integrate(const GraphOperators& ops, OdeState& x, const std::vector<double>& times, double tolerance,
               Observer observer) {
  namespace odeint = boost::numeric::odeint;
  if (!(tolerance > 0.0)) throw InputError("integrator tolerance must be positive");
  auto stepper = odeint::make_controlled(tolerance, tolerance, odeint::runge_kutta_dopri5<OdeState>());
  const Eigen::MatrixXcd b = ops.incidence_b.cast<Complex>();
  const Eigen::MatrixXcd bt = b.transpose();
  try {
    odeint::integrate_times(stepper, SchrodingerRhs{&b, &bt, ops.wave_speed_c}, x, times.begin(),
                            times.end(), 0.01, observer, odeint::max_step_checker(100000));
  } catch (const odeint::step_adjustment_error& ex) {
    throw NumericalError(fmt::format("Schrodinger integrator could not meet tolerance {}: {}", tolerance, ex.what()));
  } catch (const odeint::no_progress_error& ex) {
    throw NumericalError(fmt::format("Schrodinger integrator made no progress: {}", ex.what()));
  }
}

}  // namespace

WaveTrajectory simulate_schrodinger(const GraphOperators& ops, const Eigen::VectorXd& u0, Eigen::Index t_max,
                                    const SchrodingerOptions& options) {
  check_inputs(ops, u0, t_max);
  WaveTrajectory traj = make_trajectory(ops, u0, t_max, Backend::schrodinger);
  traj.energy.resize(t_max);
  const Eigen::Index n = ops.n_nodes();
  const double c = ops.wave_speed_c;
  const double scale = std::max(1.0, u0.norm());

  if (options.method == SchrodingerMethod::spectral) {
    const auto solver = decompose(ops.l_sym);
    const Eigen::MatrixXd& v = solver.eigenvectors();
    const Eigen::VectorXd sigma = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::VectorXd proj = v.transpose() * u0;
    // Right singular vectors of B paired with the eigenvectors of B B^T.
    Eigen::MatrixXd w = ops.incidence_b.transpose() * v;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (sigma(j) > 1e-12) {
        w.col(j) /= sigma(j);
      } else {
        w.col(j).setZero();
      }
    }
    for (Eigen::Index t = 0; t < t_max; ++t) {
      const Eigen::ArrayXd phase = c * static_cast<double>(t) * sigma.array();
      const Eigen::VectorXd u1 = v * (phase.cos() * proj.array()).matrix();
      // u2(t) = -i W sin(c t sigma) V^T u0; only its norm is needed.
      const Eigen::VectorXd u2_imag = -(w * (phase.sin() * proj.array()).matrix());
      traj.samples.col(t) = u1;
      traj.energy(t) = u1.squaredNorm() + u2_imag.squaredNorm();
    }
    traj.samples.col(0) = u0;
    return traj;
  }

  SchrodingerState start{u0.cast<Complex>(), Eigen::VectorXcd::Zero(ops.n_edges()), 0.0};
  OdeState x = pack(start);
  std::vector<double> times(static_cast<std::size_t>(t_max));
  for (std::size_t t = 0; t < times.size(); ++t) times[t] = static_cast<double>(t);
  integrate(ops, x, times, options.tolerance, [&](const OdeState& state, double t) {
    const auto col = static_cast<Eigen::Index>(std::lround(t));
    const SchrodingerState s = unpack(state, n, t);
    if (s.u1.imag().cwiseAbs().maxCoeff() > 1e-8 * scale) {
      throw NumericalError(fmt::format("Schrodinger node amplitudes are not real at t = {}", t));
    }
    traj.samples.col(col) = s.u1.real();
    traj.energy(col) = s.energy();
  });
  return traj;
}

SchrodingerState evolve_schrodinger(const GraphOperators& ops, const SchrodingerState& start, double t,
                                    double tolerance) {
  check_state(ops, start);
  OdeState x = pack(start);
  if (t > start.time) integrate(ops, x, {start.time, t}, tolerance, [](const OdeState&, double) {});
  return unpack(x, ops.n_nodes(), std::max(t, start.time));
}

SchrodingerState explicit_euler_schrodinger(const GraphOperators& ops, const SchrodingerState& start, double dt,
                                            Eigen::Index steps) {
  check_state(ops, start);
  const Eigen::MatrixXcd b = ops.incidence_b.cast<Complex>();
  const Complex minus_ic(0.0, -ops.wave_speed_c);
  SchrodingerState s = start;
  for (Eigen::Index k = 0; k < steps; ++k) {
    Eigen::VectorXcd d1 = minus_ic * (b * s.u2);
    Eigen::VectorXcd d2 = minus_ic * (b.transpose() * s.u1);
    s.u1 += dt * d1;
    s.u2 += dt * d2;
    s.time += dt;
  }
  return s;
}

Eigen::MatrixXd companion_matrix(const Eigen::MatrixXd& l_sym, double c) {
  const Eigen::Index n = l_sym.rows();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = 2.0 * Eigen::MatrixXd::Identity(n, n) - c * c * l_sym;
  m.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  m.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  return m;
}

StabilityReport stability_check(const GraphOperators& ops, double c) {
  if (!(c > 0.0)) throw InputError("wave speed must be positive");
  StabilityReport report;
  report.wave_speed_c = c;

  const auto solver = decompose(ops.l_sym);
  for (double computed : solver.eigenvalues()) {
    // L_sym is PSD with spectrum in [0, 2]; a rounding-level -1e-16 at the
    // zero eigenvalue would turn the double root rho = 1 into 1 +- 1e-8.
    const double lambda = std::clamp(computed, 0.0, 2.0);
    // rho^2 + b rho + 1 = 0: complex-conjugate roots of unit modulus when
    // b^2 <= 4, otherwise two real roots with product 1.
    const double b = c * c * lambda - 2.0;
    const double disc = b * b - 4.0;
    const double radius =
        disc <= 0.0 ? std::hypot(b / 2.0, std::sqrt(-disc) / 2.0) : (std::abs(b) + std::sqrt(disc)) / 2.0;
    report.spectral_radius = std::max(report.spectral_radius, radius);
  }

  const Eigen::MatrixXd m = companion_matrix(ops.l_sym, c);
  Eigen::EigenSolver<Eigen::MatrixXd> dense(m, /*computeEigenvectors=*/false);
  if (dense.info() == Eigen::Success) report.dense_spectral_radius = dense.eigenvalues().cwiseAbs().maxCoeff();

  report.stable = report.spectral_radius <= 1.0 + kStabilitySlack;
  return report;
}

std::string trajectory_csv(const WaveTrajectory& traj) {
  std::string out = "node";
  for (Eigen::Index t = 0; t < traj.t_max(); ++t) out += fmt::format(",t{}", t);
  out += '\n';
  for (Eigen::Index i = 0; i < traj.n_nodes(); ++i) {
    out += fmt::format("{}", i);
    for (Eigen::Index t = 0; t < traj.t_max(); ++t) out += fmt::format(",{}", traj.samples(i, t));
    out += '\n';
  }
  if (traj.energy.size() == traj.t_max()) {
    out += "energy";
    for (Eigen::Index t = 0; t < traj.t_max(); ++t) out += fmt::format(",{}", traj.energy(t));
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const WaveTrajectory& traj) {
  nlohmann::json samples = nlohmann::json::array();
  for (Eigen::Index i = 0; i < traj.n_nodes(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(traj.t_max()));
    for (Eigen::Index t = 0; t < traj.t_max(); ++t) row[static_cast<std::size_t>(t)] = traj.samples(i, t);
    samples.push_back(std::move(row));
  }
  nlohmann::json doc{{"backend", to_string(traj.backend)},
                     {"c", traj.wave_speed_c},
                     {"initial", std::vector<double>(traj.initial.begin(), traj.initial.end())},
                     {"samples", std::move(samples)}};
  doc["seed"] = traj.seed ? nlohmann::json(*traj.seed) : nlohmann::json(nullptr);
  if (traj.energy.size() > 0) doc["energy"] = std::vector<double>(traj.energy.begin(), traj.energy.end());
  return doc;
}

}  // namespace wavecluster
