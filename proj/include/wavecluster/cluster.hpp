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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "wavecluster/dmd.hpp"
#include "wavecluster/graph.hpp"
#include "wavecluster/wave.hpp"

namespace wavecluster {

struct ClusterConfig {
  double c = kDefaultWaveSpeed;
  /// Number of sign bits; at most 2^k clusters.
  int k = 1;
  /// Samples per node; 4n when unset.
  std::optional<Eigen::Index> t_max;
  Backend backend = Backend::discrete;
  MvmStrategy mvm;
  std::uint64_t seed = 0;
  double svd_tol = 1e-8;
  SchrodingerOptions schrodinger;
  /// Replaces the seeded random u(0) when set.
  std::optional<Eigen::VectorXd> initial;

  /// Throws InputError unless 0 < c < sqrt 2, 1 <= k <= n - 1 and
  /// t_max >= 2k + 2.
  void validate(std::size_t n_nodes) const;
  Eigen::Index resolved_t_max(std::size_t n_nodes) const;
};

enum class ClusterMethod { wave_dmd, classical_oracle };

std::string to_string(ClusterMethod m);

/// Coefficients whose magnitude is below this count as positive and are
/// reported in ClusterAssignment::ties.
inline constexpr double kZeroCoefficientTolerance = 1e-9;

struct SignTie {
  NodeIndex node;
  int mode;  // 0-based sign bit
};

struct ClusterAssignment {
  /// sum_j sign_bits(i, j) * 2^j, in [0, 2^k).
  std::vector<int> cluster_number;
  /// n x k, entry 1 iff the aligned coefficient is positive (or a tie).
  Eigen::MatrixXi sign_bits;
  /// n x k aligned real coefficients the bits were read from.
  Eigen::MatrixXd coefficients;
  ClusterMethod method = ClusterMethod::wave_dmd;
  std::vector<SignTie> ties;
  /// Eigenvalues 1..k+1 (starting at 0) behind the bits; for wave_dmd the
  /// median of the per-node estimates of each reference eigenvalue.
  std::vector<double> lambda;

  std::size_t n_nodes() const { return cluster_number.size(); }
  int k() const { return static_cast<int>(sign_bits.cols()); }
};

/// Everything produced by one wave-DMD clustering run.
struct WaveDmdRun {
  ClusterAssignment assignment;
  Eigen::VectorXd initial;
  std::vector<DmdResult> per_node;
  Eigen::Index t_max = 0;
};

/// Simulates the configured dynamics once, runs DMD on every node's
/// series (K = t_max / 2, W = t_max - K), drops modes with
/// | |mu| - 1 | > 1e-2 and merges conjugate pairs. Eigenvalues reported by
/// more than half of the nodes form the reference spectrum; sign bits come
/// from each node's mode nearest the k lowest nonzero references whose
/// aligned coefficients change sign (zero when the node has none within
/// half the distance to the neighbouring reference). One-signed references
/// are drift of the stationary mode and are skipped.
///
/// Throws NumericalError when fewer than k such eigenvalues reach that
/// majority.
WaveDmdRun run_wave_dmd(const Graph& g, const ClusterConfig& cfg);

inline ClusterAssignment wave_dmd_cluster(const Graph& g, const ClusterConfig& cfg) {
  return run_wave_dmd(g, cfg).assignment;
}

/// Sign bits from eigenvectors 2 .. k+1 of L_sym (dense solver).
ClusterAssignment classical_cluster(const Graph& g, int k);

/// Rotates each column so that its largest-magnitude entry is real and
/// positive (first such entry on ties) and returns the real parts.
Eigen::MatrixXd align_columns(const Eigen::MatrixXcd& values);

/// Builds an assignment from aligned n x k coefficients.
ClusterAssignment assign_from_coefficients(const Eigen::MatrixXd& aligned, ClusterMethod method);

/// Fraction of nodes on which a and b agree under the best bijection of
/// cluster ids. Exhaustive search up to 8 labels, Hungarian otherwise.
double agreement(const std::vector<int>& a, const std::vector<int>& b);
inline double agreement(const ClusterAssignment& a, const ClusterAssignment& b) {
  return agreement(a.cluster_number, b.cluster_number);
}

/// Maximum-weight perfect matching on a square weight matrix; returns
/// column assigned to each row.
std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weight);

/// Position g in [1, k_max] of the largest jump lambda_{g+1} - lambda_g of
/// an ascending spectrum (1-based, first position on ties). Advisory.
int spectral_gap_k(const std::vector<double>& eigenvalues, int k_max);

/// {"n", "k", "seed", "backend", "assignments", "agreement_vs_classical", "lambda"}
nlohmann::json cluster_result_json(const ClusterConfig& cfg, const ClusterAssignment& assignment,
                                   double agreement_vs_classical);

}  // namespace wavecluster
