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

// Seeded graph families shared by the unit and acceptance suites.

#include <cstdint>
#include <vector>

#include "oracles.hpp"
#include "wavecluster/cluster.hpp"
#include "wavecluster/datasets.hpp"

namespace wavecluster::testing {

/// One planted-partition instance of the oracle-equivalence family.
struct PlantedCase {
  int index = 0;
  std::size_t clusters = 2;
  PlantedPartition planted;
  ClusterConfig config;
};

inline constexpr int kPlantedFamilySize = 50;

/// Member `s` of the family: n = 24 + 8 (s mod 6) (at least 32 with four
/// blocks), two blocks for even s and four for odd s, p_in = 0.5,
/// p_out = 0.02, graph seed 1000 + s, u(0) seed s, k = log2(blocks).
inline PlantedCase planted_case(int s) {
  PlantedCase out;
  out.index = s;
  out.clusters = s % 2 == 0 ? 2 : 4;
  std::size_t n = 24 + 8 * static_cast<std::size_t>(s % 6);
  if (out.clusters == 4 && n < 32) n = 32;
  out.planted = gen_planted_partition(n, out.clusters, 0.5, 0.02, 1000 + static_cast<std::uint64_t>(s));
  out.config.k = out.clusters == 4 ? 2 : 1;
  out.config.seed = static_cast<std::uint64_t>(s);
  return out;
}

/// Graphs of the stability family: n in [2, 32], edge probability 0.3,
/// weights in [0.2, 2].
inline std::vector<Graph> stability_graphs(int count, std::uint32_t seed) {
  TestRng rng(seed);
  std::vector<Graph> graphs;
  for (int g = 0; g < count; ++g) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 32));
    std::vector<Edge> edges;
    for (const auto& e : random_connected_edges(n, 0.3, rng, 0.2, 2.0)) edges.push_back({e.i, e.j, e.w});
    graphs.push_back(Graph::create(n, edges));
  }
  return graphs;
}

}  // namespace wavecluster::testing
