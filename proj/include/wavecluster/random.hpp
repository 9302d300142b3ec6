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
#include <random>

#include <Eigen/Dense>

namespace wavecluster {

/// Seeded stream used for every random decision in the toolkit.
///
/// Generator "wavecluster-rng v1": std::mt19937_64 seeded with the 64-bit
/// seed; uniform doubles are (x >> 11) * 2^-53, which lies in [0, 1).
/// The mapping is fixed here rather than left to
/// std::uniform_real_distribution so that draws are identical across
/// standard libraries.
class Rng {
 public:
  static constexpr const char* kName = "wavecluster-rng v1 (mt19937_64, 53-bit uniform)";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  Eigen::VectorXd uniform_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform();
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

/// u(0) with entries independently uniform on [0, 1).
inline Eigen::VectorXd random_initial_state(Eigen::Index n, std::uint64_t seed) {
  return Rng(seed).uniform_vector(n);
}

}  // namespace wavecluster
