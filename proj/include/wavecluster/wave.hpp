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

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "json.hpp"
#include "wavecluster/analog.hpp"
#include "wavecluster/operators.hpp"

namespace wavecluster {

enum class Backend { discrete, schrodinger, closed_form };

std::string to_string(Backend b);
/// Accepts "discrete", "schrodinger", "closed-form" and "closed_form".
Backend parse_backend(std::string_view name);

enum class MvmKind { direct, analog };

std::string to_string(MvmKind k);
MvmKind parse_mvm(std::string_view name);

/// How the discrete iteration evaluates l_sym * u.
struct MvmStrategy {
  MvmKind kind = MvmKind::direct;
  AnalogConfig analog;
};

using MatVec = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Binds a strategy to a matrix.
MatVec bind_mvm(const Eigen::MatrixXd& a, const MvmStrategy& strategy);

/// Node time series u_i(t), t = 0 .. t_max-1, one row per node.
struct WaveTrajectory {
  Eigen::MatrixXd samples;
  double wave_speed_c = kDefaultWaveSpeed;
  Backend backend = Backend::discrete;
  Eigen::VectorXd initial;
  std::optional<std::uint64_t> seed;
  /// ||u1(t)||^2 + ||u2(t)||^2 per sample; Schrodinger backend only.
  Eigen::VectorXd energy;

  Eigen::Index n_nodes() const { return samples.rows(); }
  Eigen::Index t_max() const { return samples.cols(); }
};

/// u(t) = 2u(t-1) - u(t-2) - c^2 L_sym u(t-1) with u(-1) = u(0).
///
/// Throws InputError on bad arguments and NumericalError when the
/// iteration produces non-finite values (checked every 64 steps).
WaveTrajectory simulate_discrete(const GraphOperators& ops, const Eigen::VectorXd& u0, Eigen::Index t_max,
                                 const MvmStrategy& mvm = {});
WaveTrajectory simulate_discrete(const GraphOperators& ops, const Eigen::VectorXd& u0, Eigen::Index t_max,
                                 const MatVec& apply_l_sym);

/// Spectral solution of the discrete iteration,
///   u(t) = sum_j (u0 . v_j) (p_j e^{i t zeta_j} + q_j e^{-i t zeta_j}) v_j,
/// with cos zeta_j = 1 - c^2 lambda_j / 2 and p_j, q_j = (1 +- i tan(zeta_j/2)) / 2.
WaveTrajectory closed_form_wave(const GraphOperators& ops, const Eigen::VectorXd& u0, Eigen::Index t_max);

/// State of d/dt [u1; u2] = -i c [[0, B], [B^T, 0]] [u1; u2].
struct SchrodingerState {
  Eigen::VectorXcd u1;
  Eigen::VectorXcd u2;
  double time = 0.0;

  double energy() const { return u1.squaredNorm() + u2.squaredNorm(); }
};

enum class SchrodingerMethod {
  /// Exact evaluation through the eigendecomposition of l_sym.
  spectral,
  /// Adaptive Dormand-Prince integration of the coupled first-order system.
  integrator,
};

struct SchrodingerOptions {
  SchrodingerMethod method = SchrodingerMethod::spectral;
  /// Absolute and relative local error target of the integrator.
  double tolerance = 1e-10;
};

/// Samples u1 at integer times 0 .. t_max-1 from u1(0) = u0, u2(0) = 0.
/// The trajectory carries the energy of the full state at each sample.
WaveTrajectory simulate_schrodinger(const GraphOperators& ops, const Eigen::VectorXd& u0, Eigen::Index t_max,
                                    const SchrodingerOptions& options = {});

/// Evolves an arbitrary state (u2 need not vanish) to time `t` with the
/// adaptive integrator.
SchrodingerState evolve_schrodinger(const GraphOperators& ops, const SchrodingerState& start, double t,
                                    double tolerance = 1e-10);

/// Forward-Euler steps of the Schrodinger system. Not norm preserving;
/// kept to show how a naive explicit scheme drifts.
SchrodingerState explicit_euler_schrodinger(const GraphOperators& ops, const SchrodingerState& start, double dt,
                                            Eigen::Index steps);

/// [[2I - c^2 L_sym, -I], [I, 0]]
Eigen::MatrixXd companion_matrix(const Eigen::MatrixXd& l_sym, double c);

struct StabilityReport {
  double wave_speed_c = 0.0;
  /// max |rho| over the roots of rho^2 + (c^2 lambda_j - 2) rho + 1 = 0.
  double spectral_radius = 0.0;
  /// max |rho| from a general eigensolver applied to the companion matrix.
  /// The lambda = 0 block is defective, so this carries O(sqrt(eps)) error.
  double dense_spectral_radius = 0.0;
  bool stable = false;
};

inline constexpr double kStabilitySlack = 1e-9;

/// Stable iff spectral_radius <= 1 + 1e-9. Any c > 0 is accepted here so
/// that unstable speeds can be diagnosed.
StabilityReport stability_check(const GraphOperators& ops, double c);
inline StabilityReport stability_check(const GraphOperators& ops) {
  return stability_check(ops, ops.wave_speed_c);
}

/// Rows = nodes, columns = time, with a header line. A trailing "energy"
/// row is written when the trajectory carries one.
std::string trajectory_csv(const WaveTrajectory& traj);
nlohmann::json to_json(const WaveTrajectory& traj);

}  // namespace wavecluster
