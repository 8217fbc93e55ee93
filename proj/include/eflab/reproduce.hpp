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
#include <string>
#include <string_view>
#include <vector>

#include "eflab/experiment.hpp"

namespace eflab {

struct ReproduceOptions {
  std::filesystem::path out_dir = "ef-lab-repro";
  unsigned jobs = 1;
  bool svg = false;
  std::uint64_t toy_a1_iteration = 500;  // comparison point for toy_a1
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Verdict {
  std::string name;
  std::vector<Check> checks;

  bool pass() const;
  /// One line per check followed by an overall PASS/FAIL line.
  std::string render() const;
};

const std::vector<std::string>& reproduction_names();

/// Runs one reproduction, writes its CSVs (and plots) under
/// out_dir/<name>/, then re-reads them to decide the verdict.
Verdict reproduce(std::string_view name, const ReproduceOptions& opts,
                  const Reporter& report = {});

/// Wilson data seed used by fig2_span.
inline constexpr std::uint64_t kFig2DataSeed = 0;

}  // namespace eflab
