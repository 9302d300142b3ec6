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

#include "wavecluster/operators.hpp"

#include <fmt/format.h>

#include "wavecluster/error.hpp"

namespace wavecluster {

GraphOperators build_operators(const Graph& g, double c) {
  if (!(c > 0.0 && c < kMaxWaveSpeed)) {
    throw InputError(fmt::format("wave speed c = {} outside the stable interval (0, sqrt 2)", c));
  }
  if (!g.is_connected()) throw InputError("graph is not connected");

  const auto n = static_cast<Eigen::Index>(g.n_nodes());
  const auto m = static_cast<Eigen::Index>(g.n_edges());

  GraphOperators ops;
  ops.wave_speed_c = c;
  ops.degree = g.degree();
  const Eigen::MatrixXd w = g.adjacency();
  const Eigen::VectorXd inv_sqrt_d = ops.degree.cwiseSqrt().cwiseInverse();

  ops.l_rw = Eigen::MatrixXd::Identity(n, n) - ops.degree.cwiseInverse().asDiagonal() * w;
  ops.l_sym = Eigen::MatrixXd::Identity(n, n) - inv_sqrt_d.asDiagonal() * w * inv_sqrt_d.asDiagonal();
  // Rounding in the two-sided scaling can break exact symmetry.
  ops.l_sym = (0.5 * (ops.l_sym + ops.l_sym.transpose())).eval();

  ops.incidence_b = Eigen::MatrixXd::Zero(n, m);
  for (Eigen::Index e = 0; e < m; ++e) {
    const Edge& edge = g.edges()[static_cast<std::size_t>(e)];
    const double s = std::sqrt(edge.w);
    // Source is the lower index; edges are stored with i < j.
    ops.incidence_b(edge.i, e) = -s * inv_sqrt_d(edge.i);
    ops.incidence_b(edge.j, e) = s * inv_sqrt_d(edge.j);
  }

  ops.hamiltonian = Eigen::MatrixXd::Zero(n + m, n + m);
  ops.hamiltonian.topRightCorner(n, m) = c * ops.incidence_b;
  ops.hamiltonian.bottomLeftCorner(m, n) = c * ops.incidence_b.transpose();
  return ops;
}

Spectrum classical_spectrum(const GraphOperators& ops, Eigen::Index k) {
  const Eigen::Index n = ops.n_nodes();
  if (k < 1 || k > n) throw InputError(fmt::format("k = {} outside [1, {}]", k, n));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ops.l_sym);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");

  Spectrum out{solver.eigenvalues().head(k), solver.eigenvectors().leftCols(k)};
  if (std::abs(out.eigenvalues(0)) > 1e-10) {
    throw NumericalError(fmt::format("smallest l_sym eigenvalue {} is not 0", out.eigenvalues(0)));
  }
  return out;
}

}  // namespace wavecluster
