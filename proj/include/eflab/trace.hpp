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
#include <functional>
#include <optional>
#include <vector>

#include "eflab/linalg.hpp"

namespace eflab {

/// Metrics of the iterate x_t after t steps (t >= 1).
struct TraceRow {
  std::uint64_t t = 0;
  double f_val = 0.0;
  double grad_norm_sq = 0.0;  // |full_gradient(x_t)|^2
  double err_norm_sq = 0.0;   // |e_t|^2
  std::optional<double> phi_p;      // density of p_{t-1}, ec_sgd only
  std::optional<double> span_dist;  // |x_t - P_{G_t} x_t|, G_t = g_0..g_{t-1}
  std::uint64_t bits_cum = 0;
  std::optional<double> test_loss;
};

struct RecordingOptions {
  bool span = false;
  bool phi = true;
  bool test_loss = true;
  std::size_t every = 1;         // record t when t % every == 0
  std::size_t dense_prefix = 0;  // ... and every t <= dense_prefix
  bool full_batch = false;
  bool average = false;          // keep (1/(T+1)) sum_{t=0}^{T} x_t
  // Step-size decimation: gamma is multiplied by decimate_factor at each
  // listed step.
  std::vector<std::uint64_t> decimate_at;
  double decimate_factor = 0.1;

  static constexpr std::size_t kMaxSpanSteps = 5000;
};

struct OptimizerState {
  Vector x;
  Vector e;  // residual error, nonzero only for ec_sgd
  Vector m;  // momentum, nonzero only for momentum rules
  std::uint64_t t = 0;
};

struct Trace {
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;
  double f0 = 0.0;
  std::optional<double> test_loss0;
  std::vector<TraceRow> rows;
  OptimizerState final_state;
  std::optional<Vector> x_average;
  // Running minimum of contraction_delta(p_t, C(p_t)) over ec_sgd steps.
  std::optional<double> empirical_delta;
};

/// Seen after every step: the new state, the gradient used, and for ec_sgd
/// the corrected direction p_t that was compressed.
struct StepEvent {
  std::uint64_t t;  // number of steps taken so far
  const OptimizerState& state;
  const Vector& g;
  const Vector* p;
};

using StepObserver = std::function<void(const StepEvent&)>;

}  // namespace eflab
