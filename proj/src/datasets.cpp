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

#include "wavecluster/datasets.hpp"

#include <array>
#include <utility>

#include <fmt/format.h>

#include "wavecluster/error.hpp"
#include "wavecluster/random.hpp"

namespace wavecluster {

namespace {

constexpr std::array<std::pair<int, int>, 78> kKarateEdges{{
    {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},   {0, 8},   {0, 10},  {0, 11},
    {0, 12},  {0, 13},  {0, 17},  {0, 19},  {0, 21},  {0, 31},  {1, 2},   {1, 3},   {1, 7},   {1, 13},
    {1, 17},  {1, 19},  {1, 21},  {1, 30},  {2, 3},   {2, 7},   {2, 8},   {2, 9},   {2, 13},  {2, 27},
    {2, 28},  {2, 32},  {3, 7},   {3, 12},  {3, 13},  {4, 6},   {4, 10},  {5, 6},   {5, 10},  {5, 16},
    {6, 16},  {8, 30},  {8, 32},  {8, 33},  {9, 33},  {13, 33}, {14, 32}, {14, 33}, {15, 32}, {15, 33},
    {18, 32}, {18, 33}, {19, 33}, {20, 32}, {20, 33}, {22, 32}, {22, 33}, {23, 25}, {23, 27}, {23, 29},
    {23, 32}, {23, 33}, {24, 25}, {24, 27}, {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31},
    {28, 33}, {29, 32}, {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33}, {32, 33},
}};

constexpr std::array<int, 17> kOfficerFaction{9, 14, 15, 18, 20, 22, 23, 24, 25, 26, 27, 28, 29, 30, 31, 32, 33};

}  // namespace

Graph load_karate() {
  std::vector<Edge> edges;
  edges.reserve(kKarateEdges.size());
  for (const auto& [i, j] : kKarateEdges) {
    edges.push_back({static_cast<NodeIndex>(i), static_cast<NodeIndex>(j), 1.0});
  }
  return Graph::create(34, std::move(edges));
}

std::vector<int> karate_factions() {
  std::vector<int> out(34, 0);
  for (int v : kOfficerFaction) out[static_cast<std::size_t>(v)] = 1;
  return out;
}

PlantedPartition gen_planted_partition(std::size_t n, std::size_t clusters, double p_in, double p_out,
                                       std::uint64_t seed) {
  if (clusters == 0 || n == 0 || n % clusters != 0) {
    throw InputError(fmt::format("n = {} is not a positive multiple of clusters = {}", n, clusters));
  }
  if (!(0.0 <= p_out && p_out < p_in && p_in <= 1.0)) {
    throw InputError(fmt::format("need 0 <= p_out < p_in <= 1, got p_in = {}, p_out = {}", p_in, p_out));
  }
  const std::size_t block = n / clusters;
  PlantedPartition out;
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.labels[i] = static_cast<int>(i / block);

  Rng rng(seed);
  for (int attempt = 0; attempt <= kPlantedMaxRetries; ++attempt) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double p = out.labels[i] == out.labels[j] ? p_in : p_out;
        if (rng.uniform() < p) edges.push_back({i, j, 1.0});
      }
    }
    if (!edges.empty()) {
      Graph g = Graph::create(n, std::move(edges));
      if (g.is_connected()) {
        out.graph = std::move(g);
        out.retries = attempt;
        return out;
      }
    }
  }
  throw InputError(fmt::format("planted partition (n = {}, clusters = {}, p_in = {}, p_out = {}) stayed "
                               "disconnected after {} retries",
                               n, clusters, p_in, p_out, kPlantedMaxRetries));
}

}  // namespace wavecluster
