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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "eflab/analysis.hpp"
#include "eflab/config.hpp"

namespace eflab {

using Reporter = std::function<void(std::string_view)>;

struct RunOutput {
  std::vector<RunSummary> summaries;  // in config seed order
  std::filesystem::path dir;
};

/// Runs every seed of `cfg` and writes trace_seed<S>.csv, optional
/// iterates_seed<S>.csv, summary.csv and meta.txt into cfg.output_dir.
/// Output bytes depend only on the config, never on `jobs`.
RunOutput run_experiment(const ExperimentConfig& cfg, unsigned jobs = 1,
                         const Reporter& report = {});

/// Parses "sgd", "sign_sgd", "ec_sgd:top_k:3", ... into an optimizer that
/// inherits beta/projection/sign_zero from `base`.
OptimizerSpec parse_sweep_rule(std::string_view text, const OptimizerSpec& base);

struct SweepCell {
  std::string rule;
  double gamma = 0.0;
  double loss = 0.0;  // seed mean of final_f, or final test loss on wilson
  bool diverged = false;
};

struct SweepReport {
  std::vector<SweepCell> cells;
  std::vector<SweepCell> best;  // argmin per rule
};

/// Runs each rule over cfg.grid and writes sweep.csv and best.csv.
SweepReport sweep_experiment(const ExperimentConfig& cfg, unsigned jobs = 1,
                             const Reporter& report = {});

/// Writes the wilson design matrix (y, then a_1..a_d, then split) as CSV.
void export_wilson(std::size_t n, std::uint64_t data_seed, const std::filesystem::path& path);

/// Applies fn(i) for i in [0, count) on up to `jobs` threads; rethrows the
/// first failure by index.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace eflab
