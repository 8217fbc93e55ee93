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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "eflab/compressors.hpp"
#include "eflab/oracles.hpp"
#include "eflab/trace.hpp"

namespace eflab {

enum class Rule { ec_sgd, sgd, sgd_momentum, sign_sgd, sign_sgd_scaled, signum };

Rule parse_rule(std::string_view text);
std::string_view to_string(Rule rule);

struct OptimizerSpec {
  Rule rule = Rule::sgd;
  CompressorSpec compressor;  // ec_sgd only
  double gamma = 0.1;
  double beta = 0.0;          // sgd_momentum, signum
  std::optional<Box> projection;
  SignZero sign_zero = SignZero::plus_one;  // sign_sgd, sign_sgd_scaled, signum

  static OptimizerSpec ec_sgd(CompressorSpec c, double gamma) {
    OptimizerSpec s;
    s.rule = Rule::ec_sgd;
    s.compressor = c;
    s.gamma = gamma;
    return s;
  }
  static OptimizerSpec simple(Rule rule, double gamma, double beta = 0.0) {
    OptimizerSpec s;
    s.rule = rule;
    s.gamma = gamma;
    s.beta = beta;
    return s;
  }

  void validate(std::size_t d) const;
  std::string describe() const;
};

/// "none" or "box:LO:HI".
std::optional<Box> parse_projection(std::string_view text);
std::string projection_to_string(const std::optional<Box>& box);

OptimizerState init_state(const OptimizerSpec& spec, const Vector& x0);

/// One transition. `gamma_scale` multiplies spec.gamma (decimation hook).
/// When `p_out` is given and the rule is ec_sgd it receives p_t.
OptimizerState step(const OptimizerSpec& spec, const OptimizerState& st, const Vector& g,
                    Rng& rng, double gamma_scale = 1.0, Vector* p_out = nullptr);

std::uint64_t bits_per_step(const OptimizerSpec& spec, std::size_t d);

/// Drives the step rule against an oracle for T steps. Deterministic in
/// (spec, oracle, x0, T, seed). Throws numeric_failure on a non-finite
/// iterate.
Trace run(const OptimizerSpec& spec, const Oracle& oracle, const Vector& x0, std::size_t T,
          std::uint64_t seed, const RecordingOptions& record = {},
          const StepObserver& observer = {});

}  // namespace eflab
