// Copyright 2026 The ef-lab Authors. All Rights Reserved.
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
// =============================================================================
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eflab/optimizers.hpp"
#include "eflab/oracles.hpp"
#include "eflab/trace.hpp"

namespace eflab {

/// Log-spaced step-size grid, endpoints inclusive.
struct LrGrid {
  double lo = 1e-5;
  double hi = 1e1;
  std::size_t points = 9;

  std::vector<double> values() const;
};

struct InitSpec {
  enum class Kind { zeros, ones, gaussian, values };
  Kind kind = Kind::zeros;
  double scale = 1.0;    // multiplies ones/gaussian
  std::vector<double> values;  // Kind::values
};

struct ExperimentConfig {
  OracleParams oracle;
  std::uint64_t data_seed = 0;
  OptimizerSpec optimizer;
  std::size_t T = 1000;
  std::vector<std::uint64_t> seeds{1};
  InitSpec x0;
  RecordingOptions record;
  bool write_iterates = false;
  std::filesystem::path output_dir = "ef-lab-out";
  LrGrid grid;
  std::vector<std::string> sweep_rules;  // "sgd", "ec_sgd:sign_scaled", ...

  /// Throws config_error naming the offending field.
  void validate() const;
};

/// Parses the flat `namespace.key = value` format. `#` starts a comment;
/// values are bare tokens, "quoted strings" or [comma, separated, lists].
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical key = value listing, parseable by parse_config.
std::string render_config(const ExperimentConfig& cfg);

/// Seeds from EF_LAB_SEED ("7" or "1,2,3"), if set.
std::optional<std::vector<std::uint64_t>> seeds_from_env();

Vector make_x0(const InitSpec& init, std::size_t d, std::uint64_t seed);

}  // namespace eflab
