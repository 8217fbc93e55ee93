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
#include <optional>
#include <vector>

#include "eflab/linalg.hpp"
#include "eflab/oracles.hpp"
#include "eflab/trace.hpp"

namespace eflab {

struct RunSummary {
  std::uint64_t seed = 0;
  double f0 = 0.0;
  double final_f = 0.0;
  double min_f = 0.0;
  double min_grad_norm_sq = 0.0;
  std::optional<double> avg_iterate_loss;  // f(x_bar_T)
  double final_err_norm_sq = 0.0;
  std::optional<double> empirical_delta;
  std::optional<double> final_test_loss;
  std::optional<double> best_test_loss;  // includes the initial point
  std::uint64_t bits_total = 0;
};

/// Expected squared residual error bound 4(1-delta) gamma^2 sigma^2 / delta^2.
double lemma2_bound(double gamma, double sigma_sq, double delta);

/// Non-convex smooth rate of compressed SGD with error feedback:
/// 2 f0 / (gamma (T+1)) + gamma L sigma^2 / 2 + 4 gamma^2 L^2 sigma^2 (1-delta) / delta^2.
double theorem2_bound(double f0, double L, double sigma_sq, double delta, double gamma,
                      std::uint64_t T);

/// Plain SGD with gamma = 1/sqrt(T+1): (2 f0 + L sigma^2) / (2 sqrt(T+1)).
double sgd_nonconvex_bound(double f0, double L, double sigma_sq, std::uint64_t T);

/// Convex non-smooth rate for the averaged iterate:
/// |x0 - x*|^2 / (2 gamma (T+1)) + gamma sigma^2 (1/2 + 2 sqrt(1-delta) / delta).
double theorem3_bound(double dist0_sq, double gamma, std::uint64_t T, double sigma_sq,
                      double delta);

/// Squared distance-to-span bound 4 gamma^2 (1-delta) / delta^2 * max |g_i|^2.
double span_distance_bound_sq(double gamma, double delta, double max_grad_norm_sq);

/// Element t is |x_t - P_{G_t} x_t| where G_t spans g_0..g_{t-1}; needs
/// iterates.size() == gradients.size() + 1 and x_0 = 0.
std::vector<double> span_distance_series(const std::vector<Vector>& gradients,
                                         const std::vector<Vector>& iterates);

RunSummary summarize(const Trace& trace, const Oracle& oracle);

}  // namespace eflab
