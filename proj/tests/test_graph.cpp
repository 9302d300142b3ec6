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

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "wavecluster/datasets.hpp"
#include "wavecluster/error.hpp"
#include "wavecluster/graph.hpp"
#include "wavecluster/operators.hpp"

using namespace wavecluster;
using testing::TestRng;

namespace {

Graph random_graph(std::size_t n, TestRng& rng, double w_lo = 1.0, double w_hi = 1.0) {
  std::vector<Edge> edges;
  for (const auto& e : testing::random_connected_edges(n, 0.2, rng, w_lo, w_hi)) edges.push_back({e.i, e.j, e.w});
  return Graph::create(n, edges);
}

}  // namespace

TEST_CASE("load_graph defaults weights to one") {
  const Graph g = load_graph("0 1\n1 2");
  CHECK(g.n_nodes() == 3);
  CHECK(g.n_edges() == 2);
  for (const Edge& e : g.edges()) CHECK(e.w == 1.0);
}

TEST_CASE("load_graph merges the two orientations of an edge") {
  const Graph g = load_graph("0 1 2.5\n# c\n1 0 2.5");
  CHECK(g.n_nodes() == 2);
  REQUIRE(g.n_edges() == 1);
  CHECK(g.edges()[0] == Edge{0, 1, 2.5});
}

TEST_CASE("load_graph rejects bad documents") {
  CHECK_THROWS_AS(load_graph("0 x"), InputError);
  CHECK_THROWS_AS(load_graph("0"), InputError);
  CHECK_THROWS_AS(load_graph("0 1 0"), InputError);
  CHECK_THROWS_AS(load_graph("0 1 -1"), InputError);
  CHECK_THROWS_AS(load_graph("2 2"), InputError);
  CHECK_THROWS_AS(load_graph("# nothing here\n\n"), InputError);
  CHECK_THROWS_AS(load_graph("0 1 1\n1 0 2"), InputError);
  CHECK_THROWS_AS(load_graph("0 1 1 7"), InputError);
}

TEST_CASE("Graph::create validates indices") {
  CHECK_THROWS_AS(Graph::create(2, {{0, 2, 1.0}}), InputError);
  CHECK_THROWS_AS(Graph::create(2, {{0, 1, std::nan("")}}), InputError);
}

TEST_CASE("edge list and json round trips") {
  TestRng rng(11);
  const Graph g = random_graph(20, rng, 0.1, 3.0);
  CHECK(load_graph(to_edge_list(g)) == g);
  CHECK(graph_from_json(to_json(g)) == g);
  const auto doc = to_json(g);
  CHECK(doc["n"] == 20);
  CHECK(doc["edges"].size() == g.n_edges());
}

TEST_CASE("karate club data") {
  const Graph g = load_karate();
  CHECK(g.n_nodes() == 34);
  CHECK(g.n_edges() == 78);
  CHECK(g.is_connected());
  for (const Edge& e : g.edges()) CHECK(e.w == 1.0);
}

TEST_CASE("single edge operators") {
  const GraphOperators ops = build_operators(load_graph("0 1"), 1.0);
  const Eigen::Matrix2d expected{{1, -1}, {-1, 1}};
  CHECK((ops.l_sym - expected).norm() < 1e-15);
  const Spectrum s = classical_spectrum(ops, 2);
  CHECK(s.eigenvalues(0) == doctest::Approx(0.0));
  CHECK(s.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(std::abs(s.eigenvectors(0, 1) + s.eigenvectors(1, 1)) < 1e-12);
}

TEST_CASE("triangle spectrum") {
  const Spectrum s = classical_spectrum(build_operators(load_graph("0 1\n1 2\n0 2")), 3);
  CHECK(std::abs(s.eigenvalues(0)) < 1e-12);
  CHECK(s.eigenvalues(1) == doctest::Approx(1.5));
  CHECK(s.eigenvalues(2) == doctest::Approx(1.5));
}

TEST_CASE("karate Fiedler value matches a dense oracle") {
  const Graph g = load_karate();
  const auto oracle = testing::dense_eig(testing::dense_l_sym(g.adjacency()));
  const Spectrum s = classical_spectrum(build_operators(g), 2);
  CHECK(std::abs(s.eigenvalues(1) - oracle.eigenvalues()(1)) < 1e-8);
}

TEST_CASE("build_operators preconditions") {
  CHECK_THROWS_AS(build_operators(load_graph("0 1\n2 3")), InputError);
  CHECK_THROWS_AS(build_operators(load_graph("0 1"), 0.0), InputError);
  CHECK_THROWS_AS(build_operators(load_graph("0 1"), std::sqrt(2.0)), InputError);
  CHECK_NOTHROW(build_operators(load_graph("0 1"), 1.41));
}

TEST_CASE("classical_spectrum range") {
  const GraphOperators ops = build_operators(load_graph("0 1\n1 2"));
  CHECK_THROWS_AS(classical_spectrum(ops, 0), InputError);
  CHECK_THROWS_AS(classical_spectrum(ops, 4), InputError);
  const Spectrum s = classical_spectrum(ops, 3);
  for (Eigen::Index j = 0; j < 3; ++j) CHECK(s.eigenvectors.col(j).norm() == doctest::Approx(1.0));
}

TEST_CASE("planted 80-node graph has a four-cluster spectral gap") {
  const PlantedPartition p = gen_planted_partition(80, 4, 0.5, 0.02, 18);
  const Spectrum s = classical_spectrum(build_operators(p.graph), 5);
  const double cluster_spread = s.eigenvalues(3) - s.eigenvalues(0);
  CHECK(s.eigenvalues(4) - s.eigenvalues(3) > 2.0 * cluster_spread);
}

TEST_CASE("operator invariants on random weighted graphs") {
  TestRng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 64));
    const Graph g = random_graph(n, rng, 0.05, 4.0);
    const double c = rng.uniform(0.1, 1.4);
    const GraphOperators ops = build_operators(g, c);
    const Eigen::MatrixXd w = g.adjacency();
    const Eigen::VectorXd d = w.rowwise().sum();
    const Eigen::MatrixXd dm = d.asDiagonal();
    CAPTURE(trial);

    const Eigen::MatrixXd l_rw = d.cwiseInverse().asDiagonal() * (dm - w);
    CHECK((ops.l_rw - l_rw).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(ops.l_rw.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    CHECK((ops.l_rw.diagonal().array() - 1.0).abs().maxCoeff() < 1e-15);

    const Eigen::MatrixXd l_sym = testing::dense_l_sym(w);
    CHECK((ops.l_sym - l_sym).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((ops.l_sym - ops.l_sym.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ops.incidence_b * ops.incidence_b.transpose() - ops.l_sym).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(ops.incidence_b.cols() == static_cast<Eigen::Index>(g.n_edges()));

    const auto eig = testing::dense_eig(ops.l_sym);
    CHECK(eig.eigenvalues()(0) > -1e-10);
    CHECK(std::abs(eig.eigenvalues()(0)) < 1e-10);
    CHECK(eig.eigenvalues()(eig.eigenvalues().size() - 1) < 2.0 + 1e-10);

    const Eigen::Index m = ops.n_edges();
    const auto nn = static_cast<Eigen::Index>(n);
    const Eigen::MatrixXd& h = ops.hamiltonian;
    CHECK(h.rows() == nn + m);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(h.topLeftCorner(nn, nn).cwiseAbs().maxCoeff() == 0.0);
    CHECK(h.bottomRightCorner(m, m).cwiseAbs().maxCoeff() == 0.0);
    CHECK((h.topRightCorner(nn, m) - c * ops.incidence_b).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("random-walk and symmetric Fiedler vectors share signs") {
  TestRng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = random_graph(static_cast<std::size_t>(rng.integer(4, 40)), rng, 0.5, 2.0);
    const GraphOperators ops = build_operators(g);
    const auto sym = testing::dense_eig(ops.l_sym);
    // Skip graphs whose Fiedler value is degenerate; the vector is not unique.
    if (sym.eigenvalues()(2) - sym.eigenvalues()(1) < 1e-6) continue;
    Eigen::EigenSolver<Eigen::MatrixXd> rw(ops.l_rw);
    Eigen::Index second = 0;
    std::vector<std::pair<double, Eigen::Index>> order;
    for (Eigen::Index j = 0; j < rw.eigenvalues().size(); ++j) order.emplace_back(rw.eigenvalues()(j).real(), j);
    std::sort(order.begin(), order.end());
    second = order[1].second;
    const Eigen::VectorXd v_rw = rw.eigenvectors().col(second).real();
    const Eigen::VectorXd mapped = ops.degree.cwiseSqrt().cwiseInverse().asDiagonal() * sym.eigenvectors().col(1);
    const double orientation = v_rw.dot(mapped) > 0 ? 1.0 : -1.0;
    for (Eigen::Index i = 0; i < v_rw.size(); ++i) {
      if (std::abs(mapped(i)) < 1e-8) continue;
      CHECK((orientation * v_rw(i) > 0) == (mapped(i) > 0));
    }
  }
}
