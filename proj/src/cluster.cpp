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

#include "wavecluster/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "wavecluster/error.hpp"
#include "wavecluster/operators.hpp"
#include "wavecluster/random.hpp"

namespace wavecluster {

void ClusterConfig::validate(std::size_t n_nodes) const {
  if (!(c > 0.0 && c < kMaxWaveSpeed)) {
    throw InputError(fmt::format("wave speed c = {} outside (0, sqrt 2)", c));
  }
  if (k < 1 || static_cast<std::size_t>(k) + 1 > n_nodes) {
    throw InputError(fmt::format("k = {} outside [1, n - 1] for n = {}", k, n_nodes));
  }
  if (k > 30) throw InputError("k above 30 does not fit a cluster number");
  const Eigen::Index t = resolved_t_max(n_nodes);
  if (t < 2 * k + 2) throw InputError(fmt::format("t_max = {} below 2k + 2 = {}", t, 2 * k + 2));
  if (!(svd_tol > 0.0 && svd_tol < 1.0)) throw InputError(fmt::format("svd tolerance {} outside (0, 1)", svd_tol));
  if (initial && static_cast<std::size_t>(initial->size()) != n_nodes) {
    throw InputError(fmt::format("initial state has {} entries for {} nodes", initial->size(), n_nodes));
  }
}

Eigen::Index ClusterConfig::resolved_t_max(std::size_t n_nodes) const {
  return t_max.value_or(4 * static_cast<Eigen::Index>(n_nodes));
}

std::string to_string(ClusterMethod m) { return m == ClusterMethod::wave_dmd ? "wave_dmd" : "classical_oracle"; }

Eigen::MatrixXd align_columns(const Eigen::MatrixXcd& values) {
  Eigen::MatrixXd out(values.rows(), values.cols());
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      if (std::abs(values(i, j)) > best) {
        best = std::abs(values(i, j));
        pivot = i;
      }
    }
    const Complex phase = best > 0.0 ? std::conj(values(pivot, j)) / best : Complex(1.0, 0.0);
    out.col(j) = (values.col(j) * phase).real();
  }
  return out;
}

ClusterAssignment assign_from_coefficients(const Eigen::MatrixXd& aligned, ClusterMethod method) {
  ClusterAssignment out;
  out.method = method;
  out.coefficients = aligned;
  out.sign_bits = Eigen::MatrixXi::Zero(aligned.rows(), aligned.cols());
  out.cluster_number.assign(static_cast<std::size_t>(aligned.rows()), 0);
  for (Eigen::Index i = 0; i < aligned.rows(); ++i) {
    int number = 0;
    for (Eigen::Index j = 0; j < aligned.cols(); ++j) {
      const double v = aligned(i, j);
      const bool tie = std::abs(v) < kZeroCoefficientTolerance;
      if (tie) out.ties.push_back({static_cast<NodeIndex>(i), static_cast<int>(j)});
      if (tie || v > 0.0) {
        out.sign_bits(i, j) = 1;
        number |= 1 << j;
      }
    }
    out.cluster_number[static_cast<std::size_t>(i)] = number;
  }
  return out;
}

namespace {

WaveTrajectory simulate(const GraphOperators& ops, const Eigen::VectorXd& u0, Eigen::Index t_max,
                        const ClusterConfig& cfg) {
  switch (cfg.backend) {
    case Backend::discrete:
      return simulate_discrete(ops, u0, t_max, cfg.mvm);
    case Backend::closed_form:
      return closed_form_wave(ops, u0, t_max);
    case Backend::schrodinger:
      return simulate_schrodinger(ops, u0, t_max, cfg.schrodinger);
  }
  throw InputError("unknown backend");
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Per-node estimates of one eigenvalue agree to well below this; distinct
// cluster eigenvalues are further apart.
constexpr double kConsensusGap = 1e-4;

// Share of the absolute coefficient mass a sign-changing mode must carry on
// its negative side; genuine modes balance near one half.
constexpr double kMinNegativeShare = 0.01;

// Groups the pooled per-node eigenvalue estimates by single linkage at
// kConsensusGap and keeps, in ascending order, the median of every group
// that more than half of the nodes contribute to.
std::vector<double> consensus_eigenvalues(const std::vector<DmdResult>& per_node, std::size_t n) {
  std::vector<std::pair<double, std::size_t>> pooled;
  for (std::size_t i = 0; i < per_node.size(); ++i) {
    for (double lambda : per_node[i].lambda_recovered) pooled.emplace_back(lambda, i);
  }
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> out;
  std::size_t start = 0;
  while (start < pooled.size()) {
    std::size_t end = start + 1;
    while (end < pooled.size() && pooled[end].first - pooled[end - 1].first <= kConsensusGap) ++end;
    std::vector<std::size_t> nodes;
    std::vector<double> values;
    for (std::size_t m = start; m < end; ++m) {
      nodes.push_back(pooled[m].second);
      values.push_back(pooled[m].first);
    }
    std::sort(nodes.begin(), nodes.end());
    const auto distinct = static_cast<std::size_t>(std::unique(nodes.begin(), nodes.end()) - nodes.begin());
    if (2 * distinct > n) out.push_back(median(std::move(values)));
    start = end;
  }
  return out;
}

}  // namespace

WaveDmdRun run_wave_dmd(const Graph& g, const ClusterConfig& cfg) {
  const std::size_t n = g.n_nodes();
  cfg.validate(n);
  const GraphOperators ops = build_operators(g, cfg.c);

  WaveDmdRun run;
  run.t_max = cfg.resolved_t_max(n);
  run.initial = cfg.initial ? *cfg.initial : random_initial_state(static_cast<Eigen::Index>(n), cfg.seed);
  const WaveTrajectory traj = simulate(ops, run.initial, run.t_max, cfg);

  const Eigen::Index rows = run.t_max / 2;
  const Eigen::Index windows = run.t_max - rows;
  DmdOptions options;
  options.svd.truncation_tol = cfg.svd_tol;
  options.svd.power.seed = cfg.seed;

  const int k = cfg.k;
  // Per node: unit-circle merged modes with their eigenvalue estimates.
  std::vector<std::vector<MergedMode>> node_modes(n);
  run.per_node.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::VectorXd series = traj.samples.row(static_cast<Eigen::Index>(i)).transpose();
    const HankelPair pair =
        build_hankel<double>(std::span<const double>(series.data(), static_cast<std::size_t>(series.size())), rows,
                             windows, i);
    DmdResult result = dmd(pair, options);
    for (const MergedMode& m : merge_conjugate_pairs(result.mu, result.coefficients)) {
      if (std::abs(std::abs(m.mu) - 1.0) > kUnitCircleTolerance) continue;
      node_modes[i].push_back(m);
      result.lambda_recovered.push_back(std::clamp(laplacian_eigenvalue(m.mu, cfg.c, cfg.backend), 0.0, 2.0));
    }
    run.per_node.push_back(std::move(result));
  }

  // Reference eigenvalues: frequencies found by most nodes. A node misses
  // mode j when v_j vanishes there, so positions are not trusted per node.
  const std::vector<double> consensus = consensus_eigenvalues(run.per_node, n);
  if (consensus.size() < static_cast<std::size_t>(k) + 1) {
    throw NumericalError(fmt::format("most nodes resolved fewer than k + 1 = {} oscillation modes", k + 1));
  }

  // Column of node coefficients for consensus mode j, each node taking its
  // nearest mode within half the distance to the neighbouring references.
  const auto column = [&](std::size_t j) {
    double window = consensus[j] - consensus[j - 1];
    if (j + 1 < consensus.size()) window = std::min(window, consensus[j + 1] - consensus[j]);
    window *= 0.5;
    Eigen::VectorXcd col = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double>& lambda = run.per_node[i].lambda_recovered;
      double best = window;
      for (std::size_t m = 0; m < lambda.size(); ++m) {
        const double d = std::abs(lambda[m] - consensus[j]);
        if (d < best) {
          best = d;
          col(static_cast<Eigen::Index>(i)) = node_modes[i][m].coefficient;
        }
      }
    }
    return col;
  };

  // Every eigenvector past the first is orthogonal to the positive vector
  // D^1/2 1 and so carries a real share of negative entries. A consensus
  // mode without one is drift of the stationary mode (analog MVM error
  // feeding the lambda = 0 Jordan block) and is skipped.
  std::vector<double> selected{consensus.front()};
  Eigen::MatrixXcd raw(static_cast<Eigen::Index>(n), k);
  for (std::size_t j = 1; j < consensus.size() && std::ssize(selected) <= k; ++j) {
    const Eigen::VectorXcd col = column(j);
    const Eigen::VectorXd aligned = align_columns(col);
    const double total = aligned.cwiseAbs().sum();
    const double negative = (-aligned).cwiseMax(0.0).sum();
    if (!(negative > kMinNegativeShare * total)) {
      spdlog::debug("consensus mode lambda = {} is one-signed, skipped", consensus[j]);
      continue;
    }
    raw.col(std::ssize(selected) - 1) = col;
    selected.push_back(consensus[j]);
  }
  if (std::ssize(selected) < k + 1) {
    throw NumericalError(fmt::format("fewer than k = {} sign-changing oscillation modes resolved", k));
  }

  run.assignment = assign_from_coefficients(align_columns(raw), ClusterMethod::wave_dmd);
  run.assignment.lambda = std::move(selected);
  if (!run.assignment.ties.empty()) {
    spdlog::warn("{} coefficients below {} were treated as positive", run.assignment.ties.size(),
                 kZeroCoefficientTolerance);
  }
  return run;
}

ClusterAssignment classical_cluster(const Graph& g, int k) {
  if (k < 1 || static_cast<std::size_t>(k) + 1 > g.n_nodes()) {
    throw InputError(fmt::format("k = {} outside [1, n - 1] for n = {}", k, g.n_nodes()));
  }
  const GraphOperators ops = build_operators(g);
  const Spectrum spectrum = classical_spectrum(ops, k + 1);
  const Eigen::MatrixXcd vectors = spectrum.eigenvectors.rightCols(k).cast<Complex>();
  ClusterAssignment out = assign_from_coefficients(align_columns(vectors), ClusterMethod::classical_oracle);
  out.lambda.assign(spectrum.eigenvalues.data(), spectrum.eigenvalues.data() + spectrum.eigenvalues.size());
  return out;
}

std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weight) {
  // Shortest augmenting path form of the Hungarian algorithm on cost = -weight,
  // 1-based potentials u (rows) and v (columns).
  const auto n = static_cast<std::size_t>(weight.rows());
  if (weight.cols() != weight.rows()) throw InputError("assignment needs a square weight matrix");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const std::size_t r = match[col0];
      double delta = inf;
      std::size_t col1 = 0;
      for (std::size_t col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double cur = -weight(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(col - 1)) - u[r] - v[col];
        if (cur < minv[col]) {
          minv[col] = cur;
          way[col] = col0;
        }
        if (minv[col] < delta) {
          delta = minv[col];
          col1 = col;
        }
      }
      for (std::size_t col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          minv[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> out(n, -1);
  for (std::size_t col = 1; col <= n; ++col) out[match[col] - 1] = static_cast<int>(col - 1);
  return out;
}

double agreement(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) {
    throw InputError(fmt::format("cannot compare assignments of {} and {} nodes", a.size(), b.size()));
  }
  if (a.empty()) throw InputError("cannot compare empty assignments");
  std::map<int, int> ids_a, ids_b;
  for (int x : a) ids_a.emplace(x, static_cast<int>(ids_a.size()));
  for (int x : b) ids_b.emplace(x, static_cast<int>(ids_b.size()));
  const auto m = static_cast<Eigen::Index>(std::max(ids_a.size(), ids_b.size()));
  Eigen::MatrixXd overlap = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t i = 0; i < a.size(); ++i) overlap(ids_a.at(a[i]), ids_b.at(b[i])) += 1.0;

  double best = 0.0;
  if (m <= 8) {
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      double matched = 0.0;
      for (Eigen::Index r = 0; r < m; ++r) matched += overlap(r, perm[static_cast<std::size_t>(r)]);
      best = std::max(best, matched);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    const std::vector<int> perm = max_weight_assignment(overlap);
    for (Eigen::Index r = 0; r < m; ++r) best += overlap(r, perm[static_cast<std::size_t>(r)]);
  }
  return best / static_cast<double>(a.size());
}

int spectral_gap_k(const std::vector<double>& eigenvalues, int k_max) {
  if (eigenvalues.size() < 3) throw InputError("spectral gap needs at least 3 eigenvalues");
  if (!std::is_sorted(eigenvalues.begin(), eigenvalues.end())) throw InputError("eigenvalues must be ascending");
  const int limit = std::min<int>(k_max, static_cast<int>(eigenvalues.size()) - 1);
  if (limit < 1) throw InputError("k_max must be at least 1");
  int best_g = 1;
  double best_gap = -1.0;
  for (int g = 1; g <= limit; ++g) {
    const double gap = eigenvalues[static_cast<std::size_t>(g)] - eigenvalues[static_cast<std::size_t>(g) - 1];
    if (gap > best_gap) {
      best_gap = gap;
      best_g = g;
    }
  }
  return best_g;
}

nlohmann::json cluster_result_json(const ClusterConfig& cfg, const ClusterAssignment& assignment,
                                   double agreement_vs_classical) {
  return {{"n", assignment.n_nodes()},
          {"k", cfg.k},
          {"seed", cfg.seed},
          {"backend", to_string(cfg.backend)},
          {"assignments", assignment.cluster_number},
          {"agreement_vs_classical", agreement_vs_classical},
          {"lambda", assignment.lambda}};
}

}  // namespace wavecluster
