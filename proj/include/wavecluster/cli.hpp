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
#include <iosfwd>
#include <string>

#include "json.hpp"

namespace wavecluster {

/// Toolkit version string baked in at build time.
std::string toolkit_version();

/// What a run needs to be repeated: the command line, the resolved
/// configuration, the dataset, the seed and the initial state actually
/// used. duration_s is informational and excluded from reproducibility.
struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::string dataset;
  std::uint64_t seed = 0;
  std::string version = toolkit_version();
  std::string rng;
  double duration_s = 0.0;
  nlohmann::json initial_state;

  nlohmann::json to_json() const;
};

/// Entry point of the `wavecluster` tool. Subcommands: cluster, spectrum,
/// simulate, bench, gen. Returns 0 on success, 1 for usage or input
/// errors, 2 for numerical failures. Results go to `out` (or --output),
/// diagnostics to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

}  // namespace wavecluster
