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
#include <string>
#include <vector>

namespace eflab {

struct CheckResult {
  std::string group;
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<CheckResult> check_linalg(std::uint64_t seed);
std::vector<CheckResult> check_compressors(std::uint64_t seed);
std::vector<CheckResult> check_oracles(std::uint64_t seed);
std::vector<CheckResult> check_optimizers(std::uint64_t seed);
std::vector<CheckResult> check_analysis(std::uint64_t seed);

/// All groups in order.
std::vector<CheckResult> run_selftest(std::uint64_t seed = 2019);

}  // namespace eflab
