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
#include <complex>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <type_traits>

#include <Eigen/Dense>

#include "wavecluster/error.hpp"
#include "wavecluster/random.hpp"

namespace wavecluster {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct PowerOptions {
  /// Stop once successive Rayleigh quotients differ by less than tol*|gamma|
  /// and the residual ||S b - gamma b|| is below residual_tol * ||S||.
  double tol = 1e-14;
  double residual_tol = 1e-10;
  int max_iter = 20000;
  std::uint64_t seed = 0;
};

template <typename Scalar>
struct PowerResult {
  double gamma = 0.0;
  DenseVector<Scalar> b;
  int iterations = 0;
  bool converged = false;
  /// S (restricted to the complement of `locked`) annihilated the iterate.
  bool zero_matrix = false;
};

namespace detail {

template <typename Scalar>
DenseVector<Scalar> random_start(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  DenseVector<Scalar> v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if constexpr (std::is_same_v<Scalar, std::complex<double>>) {
      const double re = 2.0 * rng.uniform() - 1.0;
      v(i) = Scalar(re, 2.0 * rng.uniform() - 1.0);
    } else {
      v(i) = 2.0 * rng.uniform() - 1.0;
    }
  }
  return v;
}

template <typename Scalar>
void project_out(DenseVector<Scalar>& v, const DenseMatrix<Scalar>* locked) {
  if (locked == nullptr || locked->cols() == 0) return;
  // Two passes of classical Gram-Schmidt keep v orthogonal to round-off.
  for (int pass = 0; pass < 2; ++pass) v -= *locked * (locked->adjoint() * v);
}

template <typename Scalar>
void project_block(DenseMatrix<Scalar>& m, const DenseMatrix<Scalar>* locked, int passes) {
  if (locked == nullptr || locked->cols() == 0) return;
  for (int pass = 0; pass < passes; ++pass) m -= *locked * (locked->adjoint() * m);
}

}  // namespace detail

/// Dominant eigenpair of a symmetric (Hermitian) PSD matrix by the power
/// iteration b <- S b / ||S b|| with the Rayleigh-quotient estimate
/// gamma = b* S b / b* b.
///
/// When `locked` is given (orthonormal columns) the iterate is kept in
/// its orthogonal complement, which only removes round-off once those
/// directions have been deflated. Exhausting max_iter is reported through
/// `converged`, not thrown.
template <typename Scalar>
PowerResult<Scalar> power_method(const DenseMatrix<Scalar>& s, const PowerOptions& options,
                                 const DenseMatrix<Scalar>* locked = nullptr) {
  if (s.rows() != s.cols() || s.rows() == 0) throw InputError("power method needs a non-empty square matrix");
  const double scale = s.cwiseAbs().maxCoeff();
  if ((s - s.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale)) {
    throw InputError("power method needs a symmetric matrix");
  }

  const double noise_floor = 64.0 * std::numeric_limits<double>::epsilon() * scale * static_cast<double>(s.rows());
  PowerResult<Scalar> out;
  out.b = detail::random_start<Scalar>(s.rows(), options.seed);
  detail::project_out(out.b, locked);
  double norm = out.b.norm();
  if (scale == 0.0 || norm == 0.0) {
    out.zero_matrix = true;
    out.b = DenseVector<Scalar>::Unit(s.rows(), 0);
    return out;
  }
  out.b /= norm;

  DenseVector<Scalar> sb = s * out.b;
  detail::project_out(sb, locked);
  double gamma = std::real(out.b.dot(sb));
  for (int it = 1; it <= options.max_iter; ++it) {
    norm = sb.norm();
    if (norm < std::numeric_limits<double>::min()) {
      out.zero_matrix = true;
      out.gamma = 0.0;
      out.iterations = it;
      return out;
    }
    out.b = sb / norm;
    // Residual and Rayleigh quotient are taken for the operator restricted
    // to the complement of `locked`.
    sb = s * out.b;
    detail::project_out(sb, locked);
    const double next = std::real(out.b.dot(sb));
    out.iterations = it;
    // Rayleigh quotients of S carry O(eps * ||S||) rounding, so deeply
    // deflated matrices settle at that floor rather than at tol * |gamma|.
    const bool settled = std::abs(next - gamma) < options.tol * std::abs(next) + noise_floor;
    gamma = next;
    if (settled && (sb - gamma * out.b).norm() <= options.residual_tol * scale) {
      out.converged = true;
      break;
    }
  }
  out.gamma = gamma;
  return out;
}

template <typename Scalar>
struct BlockPowerResult {
  /// Converged leading Ritz values, descending.
  Eigen::VectorXd gamma;
  /// Matching orthonormal Ritz vectors, one per column.
  DenseMatrix<Scalar> b;
  int iterations = 0;
  bool converged = false;
};

/// Simultaneous power iteration Q <- orth(S Q) on a block of `block`
/// vectors with a Rayleigh-Ritz step after each multiplication.
///
/// Returns the leading Ritz pairs that meet the PowerOptions stop rule,
/// at most block - 1 of them so that the trailing vector guards the
/// convergence of the last accepted one. A Ritz pair inside a cluster of
/// nearly equal eigenvalues converges at the rate set by the first
/// eigenvalue outside the block rather than by the in-cluster gap, which
/// is what a single-vector iteration would be limited by. With `locked`
/// the block lives in its orthogonal complement. At max_iter the leading
/// pair is returned with converged = false.
template <typename Scalar>
BlockPowerResult<Scalar> block_power_method(const DenseMatrix<Scalar>& s, Eigen::Index block,
                                            const PowerOptions& options,
                                            const DenseMatrix<Scalar>* locked = nullptr) {
  if (s.rows() != s.cols() || s.rows() == 0) throw InputError("power method needs a non-empty square matrix");
  const Eigen::Index n = s.rows();
  const Eigen::Index free_dim = n - (locked != nullptr ? locked->cols() : 0);
  block = std::min(block, free_dim);
  if (block < 1) throw InputError("block power method needs a positive block size");
  const double scale = s.cwiseAbs().maxCoeff();
  const double noise_floor = 64.0 * std::numeric_limits<double>::epsilon() * scale * static_cast<double>(n);

  DenseMatrix<Scalar> q(n, block);
  for (Eigen::Index j = 0; j < block; ++j) {
    q.col(j) = detail::random_start<Scalar>(n, options.seed + static_cast<std::uint64_t>(j));
  }
  detail::project_block(q, locked, 2);
  // Hotelling deflation has already sent the locked directions to ~0, so
  // one projection per step only trims round-off.
  // When m is rank deficient (S has run out of spectrum in the free
  // subspace) the trailing Q columns are arbitrary and may leave the free
  // subspace, hence the projection and second QR.
  auto orthonormalize = [&](DenseMatrix<Scalar>& m) {
    Eigen::HouseholderQR<DenseMatrix<Scalar>> qr(m);
    m = qr.householderQ() * DenseMatrix<Scalar>::Identity(n, block);
    if (locked == nullptr || locked->cols() == 0) return;
    detail::project_block(m, locked, 2);
    qr.compute(m);
    m = qr.householderQ() * DenseMatrix<Scalar>::Identity(n, block);
  };
  orthonormalize(q);

  BlockPowerResult<Scalar> out;
  const Eigen::Index max_accept = std::max<Eigen::Index>(1, block == free_dim ? block : block - 1);
  Eigen::VectorXd previous = Eigen::VectorXd::Constant(block, std::numeric_limits<double>::infinity());
  for (int it = 1; it <= options.max_iter; ++it) {
    DenseMatrix<Scalar> z = s * q;
    detail::project_block(z, locked, 1);
    DenseMatrix<Scalar> h = q.adjoint() * z;
    h = (0.5 * (h + h.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> ritz(h);
    // Ascending from the solver; reverse to descending.
    const Eigen::VectorXd theta = ritz.eigenvalues().reverse();
    const DenseMatrix<Scalar> e = ritz.eigenvectors().rowwise().reverse();
    q = (q * e).eval();
    z = (z * e).eval();
    out.iterations = it;

    Eigen::Index accepted = 0;
    while (accepted < max_accept) {
      const Eigen::Index j = accepted;
      const bool settled = std::abs(theta(j) - previous(j)) < options.tol * std::abs(theta(j)) + noise_floor;
      const double residual = (z.col(j) - theta(j) * q.col(j)).norm();
      if (!settled || residual > options.residual_tol * scale) break;
      ++accepted;
    }
    previous = theta;
    const bool exhausted = it == options.max_iter;
    if (accepted > 0 || exhausted) {
      out.converged = accepted > 0;
      const Eigen::Index keep = std::max<Eigen::Index>(accepted, 1);
      out.gamma = theta.head(keep);
      out.b = q.leftCols(keep);
      return out;
    }
    q = z;
    orthonormalize(q);
  }
  return out;
}

/// Convenience form with the parameters spelled out.
template <typename Scalar>
PowerResult<Scalar> power_method(const DenseMatrix<Scalar>& s, double tol, int max_iter, std::uint64_t seed) {
  PowerOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  options.seed = seed;
  return power_method(s, options);
}

/// S - b b* S b b*  (== S - gamma b b* for an eigenpair). Leaves the rest
/// of the spectrum in place and sends the deflated eigenvalue to ~0.
template <typename Scalar>
DenseMatrix<Scalar> hotelling_deflate(const DenseMatrix<Scalar>& s, const DenseVector<Scalar>& b) {
  const Scalar rayleigh = b.dot(s * b);
  DenseMatrix<Scalar> out = s - rayleigh * (b * b.adjoint());
  return (0.5 * (out + out.adjoint())).eval();
}

/// Deflation with a precomputed Rayleigh quotient gamma.
template <typename Scalar>
DenseMatrix<Scalar> hotelling_deflate(const DenseMatrix<Scalar>& s, double gamma, const DenseVector<Scalar>& b) {
  DenseMatrix<Scalar> out = s - Scalar(gamma) * (b * b.adjoint());
  return (0.5 * (out + out.adjoint())).eval();
}

}  // namespace wavecluster
