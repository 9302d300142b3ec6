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

#include "wavecluster/dmd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <type_traits>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "wavecluster/error.hpp"

namespace wavecluster {

template <typename Scalar>
BasicHankelPair<Scalar> build_hankel(std::span<const Scalar> series, Eigen::Index k, Eigen::Index w,
                                     NodeIndex origin) {
  if (k < 1 || w < 1) throw InputError("Hankel dimensions must be positive");
  if (static_cast<Eigen::Index>(series.size()) < k + w) {
    throw InputError(fmt::format("series of length {} too short for a {} x {} Hankel pair (needs {})",
                                 series.size(), k, w, k + w));
  }
  BasicHankelPair<Scalar> pair;
  pair.series_origin = origin;
  pair.x.resize(k, w);
  pair.y.resize(k, w);
  for (Eigen::Index c = 0; c < w; ++c) {
    for (Eigen::Index r = 0; r < k; ++r) {
      pair.x(r, c) = series[static_cast<std::size_t>(r + c)];
      pair.y(r, c) = series[static_cast<std::size_t>(r + c + 1)];
    }
  }
  return pair;
}

namespace {

template <typename Scalar>
DenseMatrix<Scalar> thin_q(const DenseMatrix<Scalar>& m) {
  Eigen::HouseholderQR<DenseMatrix<Scalar>> qr(m);
  return qr.householderQ() * DenseMatrix<Scalar>::Identity(m.rows(), m.cols());
}

// Subspace iteration V <- orth(X* orth(X V)) followed by Rayleigh-Ritz on
// the small matrix Q* X V. Each product carries O(eps ||X||) rounding
// instead of the O(eps ||X||^2) of X* X, so the trailing retained
// singular values converge to their true values. A few extra random
// columns make the convergence rate (sigma_{r+p} / sigma_r)^2 rather than
// (sigma_{r+1} / sigma_r)^2. Stops once the leading r Ritz values move by
// less than 1e-12 relative, or by less than the O(eps sigma_1) rounding
// of the products.
template <typename Scalar>
void refine_subspace(const DenseMatrix<Scalar>& x, BasicReducedSvd<Scalar>& svd, const SvdOptions& options) {
  constexpr Eigen::Index kOversample = 8;
  const Eigen::Index r = svd.rank();
  const Eigen::Index width = std::min(r + kOversample, std::min(x.rows(), x.cols()));
  if (r > width) return;
  DenseMatrix<Scalar> v(x.cols(), width);
  v.leftCols(r) = svd.v_red;
  for (Eigen::Index j = r; j < width; ++j) {
    v.col(j) = detail::random_start<Scalar>(x.cols(), options.power.seed + 7919 + static_cast<std::uint64_t>(j));
  }
  v = thin_q<Scalar>(v);
  Eigen::VectorXd previous = svd.sigma;
  Eigen::VectorXd ritz;
  DenseMatrix<Scalar> u;
  for (int it = 0; it < options.refine_iterations; ++it) {
    const DenseMatrix<Scalar> q = thin_q<Scalar>(x * v);
    v = thin_q<Scalar>(x.adjoint() * q);
    const DenseMatrix<Scalar> b = q.adjoint() * x * v;
    Eigen::JacobiSVD<DenseMatrix<Scalar>> small(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    v = (v * small.matrixV()).eval();
    u = q * small.matrixU();
    ritz = small.singularValues();
    ++svd.iterations;
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * ritz(0);
    const bool settled = ((ritz.head(r) - previous).array().abs() <= 1e-12 * ritz.head(r).array() + floor).all();
    previous = ritz.head(r);
    if (settled) break;
  }
  if (ritz.size() == 0) return;
  Eigen::Index keep = r;
  while (keep > 1 && !(ritz(keep - 1) > options.truncation_tol * ritz(0))) --keep;
  svd.sigma = ritz.head(keep);
  svd.u_red = u.leftCols(keep);
  svd.v_red = v.leftCols(keep);
}

}  // namespace

template <typename Scalar>
BasicReducedSvd<Scalar> reduced_svd(const DenseMatrix<Scalar>& x, const SvdOptions& options) {
  if (!x.allFinite()) throw InputError("reduced SVD input has non-finite entries");
  const Eigen::Index full = std::min(x.rows(), x.cols());
  const Eigen::Index max_rank = options.max_rank > 0 ? std::min(options.max_rank, full) : full;

  BasicReducedSvd<Scalar> out;
  out.truncation_tol = options.truncation_tol;
  DenseMatrix<Scalar> gram = x.adjoint() * x;
  gram = (0.5 * (gram + gram.adjoint())).eval();

  DenseMatrix<Scalar> basis(x.cols(), 0);
  std::vector<double> sigma;
  PowerOptions power = options.power;
  bool done = false;
  for (std::uint64_t round = 0; !done && basis.cols() < max_rank; ++round) {
    power.seed = options.power.seed + round * 1024;
    const BlockPowerResult<Scalar> found = block_power_method(gram, options.block_size, power, &basis);
    out.iterations += found.iterations;
    if (!found.converged) {
      spdlog::debug("block power iteration at rank {} stopped after {} iterations", basis.cols(), found.iterations);
    }
    for (Eigen::Index j = 0; j < found.gamma.size() && basis.cols() < max_rank; ++j) {
      const DenseVector<Scalar> v = found.b.col(j);
      const double s = (x * v).norm();
      if (s == 0.0 || (!sigma.empty() && s <= options.truncation_tol * sigma.front())) {
        done = true;
        break;
      }
      sigma.push_back(s);
      basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
      basis.col(basis.cols() - 1) = v;
      gram = hotelling_deflate(gram, found.gamma(j), v);
    }
  }
  if (sigma.empty()) throw NumericalError("reduced SVD of a zero matrix (rank 0)");

  // Deflation order can disagree with ||X v|| ordering for near-ties.
  std::vector<Eigen::Index> order(sigma.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return sigma[a] > sigma[b]; });

  const auto r = static_cast<Eigen::Index>(sigma.size());
  out.sigma.resize(r);
  out.v_red.resize(x.cols(), r);
  for (Eigen::Index j = 0; j < r; ++j) {
    out.sigma(j) = sigma[static_cast<std::size_t>(order[j])];
    out.v_red.col(j) = basis.col(order[j]);
  }
  out.u_red = x * out.v_red * out.sigma.cwiseInverse().asDiagonal();
  if (options.refine_iterations > 0) refine_subspace(x, out, options);
  return out;
}

namespace {

// Real parts closer than this count as tied; conjugate pairs from a
// complex solver differ in Re(mu) by rounding only.
constexpr double kRealPartTie = 1e-10;

// Descending Re(mu); runs of tied real parts by ascending Im(mu).
void sort_modes(std::vector<Eigen::Index>& idx, const Eigen::VectorXcd& mu) {
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return mu(a).real() > mu(b).real(); });
  std::size_t start = 0;
  while (start < idx.size()) {
    std::size_t end = start + 1;
    while (end < idx.size() && mu(idx[end - 1]).real() - mu(idx[end]).real() <= kRealPartTie) ++end;
    std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(start), idx.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](Eigen::Index a, Eigen::Index b) { return mu(a).imag() < mu(b).imag(); });
    start = end;
  }
}

template <typename Scalar>
Eigen::ComplexEigenSolver<Eigen::MatrixXcd> complex_eig(const DenseMatrix<Scalar>& a) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a.template cast<Complex>());
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition of the DMD operator failed");
  return solver;
}

}  // namespace

template <typename Scalar>
DmdResult dmd(const BasicHankelPair<Scalar>& pair, const DmdOptions& options) {
  if (pair.x.rows() != pair.y.rows() || pair.x.cols() != pair.y.cols() || pair.x.size() == 0) {
    throw InputError("Hankel pair matrices must have equal, non-zero shapes");
  }
  const BasicReducedSvd<Scalar> svd = reduced_svd<Scalar>(pair.x, options.svd);

  // Projected operator U^+ Y V Sigma^-1. With orthonormal U (exact singular
  // vectors) U^+ = U*; the pseudoinverse keeps the projection exact when
  // the power iteration leaves U slightly non-orthogonal.
  const DenseMatrix<Scalar> yv = pair.y * svd.v_red * svd.sigma.cwiseInverse().asDiagonal();
  const DenseMatrix<Scalar> a_tilde = svd.u_red.colPivHouseholderQr().solve(yv);

  Eigen::VectorXcd mu_all;
  Eigen::MatrixXcd xi_all;
  if constexpr (std::is_same_v<Scalar, double>) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a_tilde);
    if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition of the DMD operator failed");
    mu_all = solver.eigenvalues();
    xi_all = solver.eigenvectors();
  } else {
    const auto solver = complex_eig(a_tilde);
    mu_all = solver.eigenvalues();
    xi_all = solver.eigenvectors();
  }

  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < mu_all.size(); ++j) {
    if (std::abs(mu_all(j)) > options.zero_eigenvalue_tol) keep.push_back(j);
  }
  sort_modes(keep, mu_all);
  const auto r = static_cast<Eigen::Index>(keep.size());
  if (r == 0) throw NumericalError("DMD operator has no nonzero eigenvalues");

  DmdResult out;
  out.node = pair.series_origin;
  out.svd_rank = svd.rank();
  out.mu.resize(r);
  Eigen::MatrixXcd xi(svd.rank(), r);
  for (Eigen::Index j = 0; j < r; ++j) {
    out.mu(j) = mu_all(keep[static_cast<std::size_t>(j)]);
    xi.col(j) = xi_all.col(keep[static_cast<std::size_t>(j)]);
  }
  out.modes = yv.template cast<Complex>() * xi * out.mu.cwiseInverse().asDiagonal();

  const Eigen::VectorXcd x0 = pair.x.col(0).template cast<Complex>();
  // Condition estimate from the Gram matrix; only used for reporting.
  const Eigen::MatrixXcd mode_gram = out.modes.adjoint() * out.modes;
  const Eigen::VectorXd gram_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(mode_gram, Eigen::EigenvaluesOnly)
                                       .eigenvalues();
  const double smallest = std::max(gram_eig(0), 0.0);
  out.mode_condition = smallest > 0.0 ? std::sqrt(gram_eig(gram_eig.size() - 1) / smallest)
                                      : std::numeric_limits<double>::infinity();
  if (!(out.mode_condition < 1e7)) {
    spdlog::warn("DMD mode matrix at node {} is nearly rank deficient (condition {:.3g})", out.node,
                 out.mode_condition);
  }
  out.a_hat = out.modes.completeOrthogonalDecomposition().solve(x0);
  out.coefficients = out.modes.row(0).transpose().cwiseProduct(out.a_hat);
  return out;
}

template BasicHankelPair<double> build_hankel(std::span<const double>, Eigen::Index, Eigen::Index, NodeIndex);
template BasicHankelPair<Complex> build_hankel(std::span<const Complex>, Eigen::Index, Eigen::Index, NodeIndex);
template BasicReducedSvd<double> reduced_svd(const DenseMatrix<double>&, const SvdOptions&);
template BasicReducedSvd<Complex> reduced_svd(const DenseMatrix<Complex>&, const SvdOptions&);
template DmdResult dmd(const BasicHankelPair<double>&, const DmdOptions&);
template DmdResult dmd(const BasicHankelPair<Complex>&, const DmdOptions&);

std::vector<MergedMode> merge_conjugate_pairs(const Eigen::VectorXcd& mu, const Eigen::VectorXcd& coefficients,
                                              double tol) {
  if (mu.size() != coefficients.size()) throw InputError("mu and coefficient counts differ");
  std::vector<MergedMode> out;
  std::vector<bool> used(static_cast<std::size_t>(mu.size()), false);
  for (Eigen::Index a = 0; a < mu.size(); ++a) {
    if (used[static_cast<std::size_t>(a)]) continue;
    used[static_cast<std::size_t>(a)] = true;
    MergedMode mode{mu(a), coefficients(a), 1};
    if (std::abs(mu(a).imag()) > tol) {
      Eigen::Index partner = -1;
      double best = tol;
      for (Eigen::Index b = 0; b < mu.size(); ++b) {
        if (used[static_cast<std::size_t>(b)]) continue;
        const double d = std::abs(mu(b) - std::conj(mu(a)));
        if (d <= best) {
          best = d;
          partner = b;
        }
      }
      if (partner >= 0) {
        used[static_cast<std::size_t>(partner)] = true;
        mode.coefficient += coefficients(partner);
        mode.multiplicity = 2;
      }
    }
    if (mode.mu.imag() < 0.0) mode.mu = std::conj(mode.mu);
    out.push_back(mode);
  }
  return out;
}

double laplacian_eigenvalue(Complex mu, double c, Backend backend) {
  if (backend == Backend::schrodinger) {
    const double freq = std::arg(mu) / c;
    return freq * freq;
  }
  return (2.0 - 2.0 * mu.real()) / (c * c);
}

std::vector<double> recover_laplacian_eigenvalues(const Eigen::VectorXcd& mu, double c, Backend backend) {
  if (!(c > 0.0)) throw InputError("wave speed must be positive");
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    if (std::abs(std::abs(mu(j)) - 1.0) > kUnitCircleTolerance) {
      throw NumericalError(fmt::format("DMD eigenvalue {}{:+}i is off the unit circle (|mu| = {})", mu(j).real(),
                                       mu(j).imag(), std::abs(mu(j))));
    }
  }
  const std::vector<MergedMode> merged = merge_conjugate_pairs(mu, Eigen::VectorXcd::Zero(mu.size()));
  std::vector<double> out;
  out.reserve(merged.size());
  for (const MergedMode& m : merged) {
    const double raw = laplacian_eigenvalue(m.mu, c, backend);
    const double clipped = std::clamp(raw, 0.0, 2.0);
    if (std::abs(raw - clipped) > 1e-3) {
      spdlog::warn("recovered eigenvalue {} clipped to [0, 2]", raw);
    }
    out.push_back(clipped);
  }
  return out;
}

nlohmann::json to_json(const DmdResult& result) {
  nlohmann::json mu = nlohmann::json::array();
  nlohmann::json coefficients = nlohmann::json::array();
  for (Eigen::Index j = 0; j < result.mu.size(); ++j) {
    mu.push_back({result.mu(j).real(), result.mu(j).imag()});
    coefficients.push_back({result.coefficients(j).real(), result.coefficients(j).imag()});
  }
  return {{"node", result.node},
          {"mu", std::move(mu)},
          {"lambda", result.lambda_recovered},
          {"coefficients", std::move(coefficients)}};
}

}  // namespace wavecluster
