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

#include <cmath>

#include <Eigen/Dense>

#include "wavecluster/graph.hpp"

namespace wavecluster {

/// Upper end (exclusive) of the stable wave-speed interval (0, sqrt 2).
inline const double kMaxWaveSpeed = std::sqrt(2.0);
inline constexpr double kDefaultWaveSpeed = 1.0;

/// Matrices derived from a connected graph.
///
///   l_rw        = I - D^-1 W
///   l_sym       = I - D^-1/2 W D^-1/2
///   incidence_b = D^-1/2 * iota, column e carrying -sqrt(w_e) at the lower
///                 endpoint (source) and +sqrt(w_e) at the higher one
///   hamiltonian = c * [[0, B], [B^T, 0]]
///
/// B B^T == l_sym for weighted graphs as well as unweighted ones.
struct GraphOperators {
  Eigen::VectorXd degree;
  Eigen::MatrixXd l_rw;
  Eigen::MatrixXd l_sym;
  Eigen::MatrixXd incidence_b;
  Eigen::MatrixXd hamiltonian;
  double wave_speed_c = kDefaultWaveSpeed;

  Eigen::Index n_nodes() const { return l_sym.rows(); }
  Eigen::Index n_edges() const { return incidence_b.cols(); }
};

/// Throws InputError when g is disconnected or c is outside (0, sqrt 2).
GraphOperators build_operators(const Graph& g, double c = kDefaultWaveSpeed);

struct Spectrum {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // n x k, unit columns
};

/// First k eigenpairs of l_sym from a dense symmetric eigensolver.
/// Throws InputError unless 1 <= k <= n, NumericalError if the leading
/// eigenvalue is not 0 within 1e-10.
Spectrum classical_spectrum(const GraphOperators& ops, Eigen::Index k);

}  // namespace wavecluster
