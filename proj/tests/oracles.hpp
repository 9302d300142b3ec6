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

// Independent reference computations shared by the test binaries. None of
// these call into the library's numerical kernels.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace wavecluster::testing {

/// Dense L_sym straight from the elementwise definition.
inline Eigen::MatrixXd dense_l_sym(const Eigen::MatrixXd& w) {
  const Eigen::Index n = w.rows();
  const Eigen::VectorXd d = w.rowwise().sum();
  Eigen::MatrixXd l(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      l(i, j) = (i == j ? 1.0 : 0.0) - w(i, j) / std::sqrt(d(i) * d(j));
    }
  }
  return l;
}

inline Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense_eig(const Eigen::MatrixXd& sym) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym);
}

inline Eigen::VectorXd dense_singular_values(const Eigen::MatrixXd& x) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(x).singularValues();
}

inline double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ca = a.array() - a.mean();
  const Eigen::VectorXd cb = b.array() - b.mean();
  return ca.dot(cb) / (ca.norm() * cb.norm());
}

/// Test-local generator, deliberately not the library's Rng.
class TestRng {
 public:
  explicit TestRng(std::uint32_t seed) : engine_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  Eigen::MatrixXd matrix(Eigen::Index r, Eigen::Index c, double lo = 0.0, double hi = 1.0) {
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = uniform(lo, hi);
    return m;
  }
  Eigen::VectorXd vector(Eigen::Index n, double lo = 0.0, double hi = 1.0) { return matrix(n, 1, lo, hi); }

 private:
  std::mt19937 engine_;
};

/// Edges of a random connected graph: a random spanning tree plus extra
/// edges with probability p, weights in [w_lo, w_hi].
struct EdgeTriple {
  std::size_t i, j;
  double w;
};
inline std::vector<EdgeTriple> random_connected_edges(std::size_t n, double p, TestRng& rng, double w_lo = 1.0,
                                                      double w_hi = 1.0) {
  std::vector<EdgeTriple> edges;
  std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
  for (std::size_t v = 1; v < n; ++v) {
    const auto u = static_cast<std::size_t>(rng.integer(0, static_cast<int>(v) - 1));
    edges.push_back({u, v, rng.uniform(w_lo, w_hi)});
    present[u][v] = present[v][u] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!present[i][j] && rng.uniform() < p) edges.push_back({i, j, rng.uniform(w_lo, w_hi)});
  return edges;
}

/// Classical fourth-order Runge-Kutta with a fixed step.
inline Eigen::VectorXd rk4(const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
                           Eigen::VectorXd x, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  double t = t0;
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXd k1 = f(t, x);
    const Eigen::VectorXd k2 = f(t + h / 2, x + h / 2 * k1);
    const Eigen::VectorXd k3 = f(t + h / 2, x + h / 2 * k2);
    const Eigen::VectorXd k4 = f(t + h, x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  return x;
}

/// u(t) = sum_j a_j exp(i zeta_j t), t = 0 .. length-1.
inline std::vector<std::complex<double>> multi_frequency_signal(const std::vector<std::complex<double>>& a,
                                                                const std::vector<double>& zeta, int length) {
  std::vector<std::complex<double>> u(static_cast<std::size_t>(length));
  for (int t = 0; t < length; ++t) {
    std::complex<double> s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * std::exp(std::complex<double>(0.0, zeta[j] * t));
    u[static_cast<std::size_t>(t)] = s;
  }
  return u;
}

// First time the slowest component's error drops to eps, found by RK4 on
// the undecoupled vector ODE dx/dt = rate * U (A y - x) and bisection
// inside the crossing step.
inline double ode_crossing_time(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double rate, double eps,
                                double horizon) {
  const Eigen::VectorXd target = a * y;
  const Eigen::VectorXd u = (1.0 + a.rowwise().sum().array()).inverse();
  const auto f = [&](double, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return rate * u.cwiseProduct(target - x);
  };
  const auto err = [&](const Eigen::VectorXd& x) { return (x - target).cwiseAbs().maxCoeff(); };
  const int steps = 4000;
  const double h = horizon / steps;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(y.size());
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXd next = rk4(f, x, s * h, (s + 1) * h, 4);
    if (err(next) <= eps) {
      double lo = 0.0, hi = h;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (err(rk4(f, x, 0.0, mid, 8)) <= eps ? hi : lo) = mid;
      }
      return s * h + hi;
    }
    x = next;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace wavecluster::testing
