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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

namespace wavecluster {

using NodeIndex = std::size_t;

struct Edge {
  NodeIndex i;
  NodeIndex j;
  double w;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted undirected graph without self-loops.
///
/// Construction goes through Graph::create (or load_graph), which enforces
/// strictly positive weights, i != j, at most one edge per unordered pair
/// and node indices in [0, n). Edges are stored with i < j, sorted.
/// Connectivity is not a type invariant; operators and clustering reject
/// disconnected graphs.
class Graph {
 public:
  Graph() = default;

  static Graph create(std::size_t n_nodes, std::vector<Edge> edges);

  std::size_t n_nodes() const { return n_nodes_; }
  std::size_t n_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Dense symmetric weighted adjacency matrix W.
  Eigen::MatrixXd adjacency() const;
  /// Row sums of W.
  Eigen::VectorXd degree() const;

  bool is_connected() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  Graph(std::size_t n, std::vector<Edge> edges) : n_nodes_(n), edges_(std::move(edges)) {}

  std::size_t n_nodes_ = 0;
  std::vector<Edge> edges_;
};

/// Parses an edge list: one "i j [w]" per line, '#' starts a comment,
/// blank lines ignored. The node count is max index + 1.
Graph load_graph(std::string_view text);
Graph load_graph_file(const std::string& path);

/// Inverse of load_graph: "i j w" per edge with round-trip precision.
std::string to_edge_list(const Graph& g);

/// {"n": int, "edges": [[i, j, w], ...]}
nlohmann::json to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& doc);

}  // namespace wavecluster
