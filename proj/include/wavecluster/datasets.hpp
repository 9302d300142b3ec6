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
#include <vector>

#include "wavecluster/graph.hpp"

namespace wavecluster {

/// Zachary's karate club: 34 members, 78 unweighted friendships, 0-indexed.
Graph load_karate();

/// Documented post-split faction per member (0 = instructor, 1 = officer).
std::vector<int> karate_factions();

struct PlantedPartition {
  Graph graph;
  /// Block of each node; node i belongs to block i / (n / clusters).
  std::vector<int> labels;
  /// Number of draws that were rejected as disconnected.
  int retries = 0;
};

inline constexpr int kPlantedMaxRetries = 100;

/// Independent unit-weight edge coin flips, probability p_in inside a block
/// and p_out across blocks, pairs visited in (i, j) lexicographic order
/// from one seeded stream. Disconnected draws are redrawn from the same
/// stream; InputError after kPlantedMaxRetries redraws or when n is not a
/// multiple of clusters or !(0 <= p_out < p_in <= 1).
PlantedPartition gen_planted_partition(std::size_t n, std::size_t clusters, double p_in, double p_out,
                                       std::uint64_t seed);

}  // namespace wavecluster
