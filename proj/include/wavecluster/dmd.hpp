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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "wavecluster/graph.hpp"
#include "wavecluster/power_method.hpp"
#include "wavecluster/wave.hpp"

namespace wavecluster {

using Complex = std::complex<double>;

/// Time-delay (Hankel) embedding of one scalar series:
///   x(r, c) = u(r + c),  y(r, c) = u(r + c + 1).
template <typename Scalar>
struct BasicHankelPair {
  DenseMatrix<Scalar> x;
  DenseMatrix<Scalar> y;
  NodeIndex series_origin = 0;

  Eigen::Index rows() const { return x.rows(); }     // K
  Eigen::Index windows() const { return x.cols(); }  // W
};

using HankelPair = BasicHankelPair<double>;
using ComplexHankelPair = BasicHankelPair<Complex>;

/// Requires series.size() >= k + w.
template <typename Scalar>
BasicHankelPair<Scalar> build_hankel(std::span<const Scalar> series, Eigen::Index k, Eigen::Index w,
                                     NodeIndex origin = 0);

template <typename Scalar>
struct BasicReducedSvd {
  DenseMatrix<Scalar> u_red;  // K x r
  Eigen::VectorXd sigma;      // r, descending
  DenseMatrix<Scalar> v_red;  // W x r, orthonormal columns
  double truncation_tol = 0.0;
  /// Total power iterations spent.
  long iterations = 0;

  Eigen::Index rank() const { return sigma.size(); }
};

using ReducedSvd = BasicReducedSvd<double>;

struct SvdOptions {
  /// Keep sigma_i > truncation_tol * sigma_1.
  double truncation_tol = 1e-8;
  /// Upper bound on the rank; <= 0 means min(K, W).
  Eigen::Index max_rank = 0;
  /// Vectors iterated together; see block_power_method.
  Eigen::Index block_size = 24;
  /// Cap on subspace iterations with X and X* after the Gram-matrix pass;
  /// 0 skips the refinement.
  int refine_iterations = 64;
  PowerOptions power;
};

/// Reduced SVD from repeated (block) power iteration on X* X with
/// Hotelling deflation of every accepted pair. sigma_i is evaluated as ||X v_i|| rather than sqrt(gamma_i),
/// and u_red = X v_red diag(1/sigma). The retained subspace is then
/// polished by subspace iteration applying X and X* separately with a
/// Rayleigh-Ritz step, since X* X squares the rounding error and blurs
/// singular values near sqrt(eps) sigma_1. Throws NumericalError for a zero X.
template <typename Scalar>
BasicReducedSvd<Scalar> reduced_svd(const DenseMatrix<Scalar>& x, const SvdOptions& options = {});

struct DmdOptions {
  SvdOptions svd;
  /// Eigenvalues of the projected operator with |mu| below this are dropped.
  double zero_eigenvalue_tol = 1e-10;
};

/// Output of exact DMD on one Hankel pair.
///
/// Modes are ordered by descending Re(mu), ties by ascending Im(mu).
/// modes(:, j) is the un-normalised (1/mu) Y V Sigma^-1 xi_j, a_hat solves
/// modes * a_hat = x(0) in the least-squares sense, and
/// coefficients(j) = modes(0, j) * a_hat(j), the amplitude of mu_j^t in
/// the series.
struct DmdResult {
  NodeIndex node = 0;
  Eigen::VectorXcd mu;
  Eigen::MatrixXcd modes;
  Eigen::VectorXcd a_hat;
  Eigen::VectorXcd coefficients;
  /// Filled by callers that know the dynamics (see recover_laplacian_eigenvalues).
  std::vector<double> lambda_recovered;
  Eigen::Index svd_rank = 0;
  /// sigma_max / sigma_min of the mode matrix.
  double mode_condition = 0.0;
};

template <typename Scalar>
DmdResult dmd(const BasicHankelPair<Scalar>& pair, const DmdOptions& options = {});

/// Convenience overload with just the truncation tolerance.
template <typename Scalar>
DmdResult dmd(const BasicHankelPair<Scalar>& pair, double truncation_tol) {
  DmdOptions options;
  options.svd.truncation_tol = truncation_tol;
  return dmd(pair, options);
}

/// Oscillation frequency shared by a conjugate pair (or a lone real mu).
struct MergedMode {
  Complex mu;           // representative with Im(mu) >= 0
  Complex coefficient;  // a(mu) + a(conj mu)
  int multiplicity = 1;
};

/// Pairs mu with conj(mu) (distance <= tol) keeping the DMD ordering.
std::vector<MergedMode> merge_conjugate_pairs(const Eigen::VectorXcd& mu, const Eigen::VectorXcd& coefficients,
                                              double tol = 1e-8);

inline constexpr double kUnitCircleTolerance = 1e-2;

/// Maps unit-modulus DMD eigenvalues back to Laplacian eigenvalues, one per
/// conjugate pair:
///   discrete / closed-form: lambda = (2 - 2 Re mu) / c^2
///   schrodinger:            lambda = (arg mu / c)^2
/// Results are clipped to [0, 2]; clips larger than 1e-3 are logged.
/// Throws NumericalError if some | |mu| - 1 | > 1e-2.
std::vector<double> recover_laplacian_eigenvalues(const Eigen::VectorXcd& mu, double c, Backend backend);

/// Single-mode version without merging or clipping.
double laplacian_eigenvalue(Complex mu, double c, Backend backend);

/// {"node": i, "mu": [[re, im], ...], "lambda": [...], "coefficients": [[re, im], ...]}
nlohmann::json to_json(const DmdResult& result);

}  // namespace wavecluster
