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

#include "wavecluster/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <utility>

#include <fmt/format.h>

#include "wavecluster/error.hpp"

namespace wavecluster {

Graph Graph::create(std::size_t n_nodes, std::vector<Edge> edges) {
  std::map<std::pair<NodeIndex, NodeIndex>, double> unique;
  for (const Edge& e : edges) {
    if (e.i >= n_nodes || e.j >= n_nodes) {
      throw InputError(fmt::format("edge ({}, {}) outside node range [0, {})", e.i, e.j, n_nodes));
    }
    if (e.i == e.j) {
      throw InputError(fmt::format("self-loop at node {}", e.i));
    }
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw InputError(fmt::format("edge ({}, {}) has non-positive or non-finite weight {}", e.i, e.j, e.w));
    }
    const auto key = std::minmax(e.i, e.j);
    auto [it, inserted] = unique.emplace(key, e.w);
    if (!inserted && it->second != e.w) {
      throw InputError(fmt::format("edge ({}, {}) listed with conflicting weights {} and {}", key.first,
                                   key.second, it->second, e.w));
    }
  }
  std::vector<Edge> canonical;
  canonical.reserve(unique.size());
  for (const auto& [key, w] : unique) canonical.push_back({key.first, key.second, w});
  return Graph(n_nodes, std::move(canonical));
}

Eigen::MatrixXd Graph::adjacency() const {
  const auto n = static_cast<Eigen::Index>(n_nodes_);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : edges_) {
    w(e.i, e.j) = e.w;
    w(e.j, e.i) = e.w;
  }
  return w;
}

Eigen::VectorXd Graph::degree() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_nodes_));
  for (const Edge& e : edges_) {
    d(e.i) += e.w;
    d(e.j) += e.w;
  }
  return d;
}

bool Graph::is_connected() const {
  if (n_nodes_ == 0) return false;
  std::vector<std::vector<NodeIndex>> nbrs(n_nodes_);
  for (const Edge& e : edges_) {
    nbrs[e.i].push_back(e.j);
    nbrs[e.j].push_back(e.i);
  }
  std::vector<bool> seen(n_nodes_, false);
  std::queue<NodeIndex> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const NodeIndex v = frontier.front();
    frontier.pop();
    for (NodeIndex u : nbrs[v]) {
      if (!seen[u]) {
        seen[u] = true;
        ++reached;
        frontier.push(u);
      }
    }
  }
  return reached == n_nodes_;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

Graph load_graph(std::string_view text) {
  std::vector<Edge> edges;
  std::size_t max_index = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    std::vector<std::string_view> tokens;
    while (!line.empty()) {
      const auto sep = line.find_first_of(" \t");
      tokens.push_back(line.substr(0, sep));
      line = sep == std::string_view::npos ? std::string_view{} : trim(line.substr(sep));
    }
    if (tokens.size() < 2 || tokens.size() > 3) {
      throw InputError(fmt::format("line {}: expected \"i j [w]\"", line_no));
    }
    Edge e{0, 0, 1.0};
    if (!parse_number(tokens[0], e.i) || !parse_number(tokens[1], e.j)) {
      throw InputError(fmt::format("line {}: node indices must be non-negative integers", line_no));
    }
    if (tokens.size() == 3 && !parse_number(tokens[2], e.w)) {
      throw InputError(fmt::format("line {}: malformed weight '{}'", line_no, tokens[2]));
    }
    if (!(e.w > 0.0)) {
      throw InputError(fmt::format("line {}: weight must be positive", line_no));
    }
    if (e.i == e.j) {
      throw InputError(fmt::format("line {}: self-loop at node {}", line_no, e.i));
    }
    max_index = std::max({max_index, e.i, e.j});
    edges.push_back(e);
  }
  if (edges.empty()) throw InputError("edge list contains no edges");
  return Graph::create(max_index + 1, std::move(edges));
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_graph(buffer.str());
}

std::string to_edge_list(const Graph& g) {
  std::string out = fmt::format("# {} nodes, {} edges\n", g.n_nodes(), g.n_edges());
  for (const Edge& e : g.edges()) out += fmt::format("{} {} {}\n", e.i, e.j, e.w);
  return out;
}

nlohmann::json to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.i, e.j, e.w});
  return {{"n", g.n_nodes()}, {"edges", std::move(edges)}};
}

Graph graph_from_json(const nlohmann::json& doc) {
  try {
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      edges.push_back({e.at(0).get<NodeIndex>(), e.at(1).get<NodeIndex>(), e.at(2).get<double>()});
    }
    return Graph::create(doc.at("n").get<std::size_t>(), std::move(edges));
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(fmt::format("malformed graph document: {}", ex.what()));
  }
}

}  // namespace wavecluster
