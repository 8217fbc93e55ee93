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
#include "eflab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "eflab/error.hpp"

namespace eflab {

namespace {

void require_delta(double delta, const char* who) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    fail(ErrorCode::invalid_argument,
         fmt::format("{}: delta must lie in (0, 1], got {}", who, delta));
  }
}

void require_nonneg(double v, const char* who, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    fail(ErrorCode::invalid_argument, fmt::format("{}: {} must be >= 0", who, name));
  }
}

void require_positive(double v, const char* who, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorCode::invalid_argument, fmt::format("{}: {} must be > 0", who, name));
  }
}

}  // namespace

double lemma2_bound(double gamma, double sigma_sq, double delta) {
  require_delta(delta, "lemma2_bound");
  require_positive(gamma, "lemma2_bound", "gamma");
  require_nonneg(sigma_sq, "lemma2_bound", "sigma_sq");
  return 4.0 * (1.0 - delta) * gamma * gamma * sigma_sq / (delta * delta);
}

double theorem2_bound(double f0, double L, double sigma_sq, double delta, double gamma,
                      std::uint64_t T) {
  require_delta(delta, "theorem2_bound");
  require_nonneg(f0, "theorem2_bound", "f0");
  require_nonneg(L, "theorem2_bound", "L");
  require_nonneg(sigma_sq, "theorem2_bound", "sigma_sq");
  require_positive(gamma, "theorem2_bound", "gamma");
  const double t1 = static_cast<double>(T) + 1.0;
  return 2.0 * f0 / (gamma * t1) + gamma * L * sigma_sq / 2.0 +
         4.0 * gamma * gamma * L * L * sigma_sq * (1.0 - delta) / (delta * delta);
}

double sgd_nonconvex_bound(double f0, double L, double sigma_sq, std::uint64_t T) {
  require_nonneg(f0, "sgd_nonconvex_bound", "f0");
  require_nonneg(L, "sgd_nonconvex_bound", "L");
  require_nonneg(sigma_sq, "sgd_nonconvex_bound", "sigma_sq");
  return (2.0 * f0 + L * sigma_sq) / (2.0 * std::sqrt(static_cast<double>(T) + 1.0));
}

double theorem3_bound(double dist0_sq, double gamma, std::uint64_t T, double sigma_sq,
                      double delta) {
  require_delta(delta, "theorem3_bound");
  require_nonneg(dist0_sq, "theorem3_bound", "dist0_sq");
  require_positive(gamma, "theorem3_bound", "gamma");
  require_nonneg(sigma_sq, "theorem3_bound", "sigma_sq");
  const double t1 = static_cast<double>(T) + 1.0;
  return dist0_sq / (2.0 * gamma * t1) +
         gamma * sigma_sq * (0.5 + 2.0 * std::sqrt(1.0 - delta) / delta);
}

double span_distance_bound_sq(double gamma, double delta, double max_grad_norm_sq) {
  require_delta(delta, "span_distance_bound_sq");
  return 4.0 * gamma * gamma * (1.0 - delta) / (delta * delta) * max_grad_norm_sq;
}

std::vector<double> span_distance_series(const std::vector<Vector>& gradients,
                                         const std::vector<Vector>& iterates) {
  if (iterates.size() != gradients.size() + 1) {
    fail(ErrorCode::dimension_mismatch,
         "span_distance_series: need one more iterate than gradients");
  }
  const Eigen::Index d = iterates.front().size();
  if (!iterates.front().isZero(0.0)) {
    fail(ErrorCode::invalid_argument, "span_distance_series: x_0 must be 0");
  }
  SpanBasis basis(d);
  std::vector<double> out;
  out.reserve(iterates.size());
  out.push_back(0.0);
  for (std::size_t t = 0; t < gradients.size(); ++t) {
    basis.extend(gradients[t]);
    out.push_back(basis.distance(iterates[t + 1]));
  }
  return out;
}

RunSummary summarize(const Trace& trace, const Oracle& oracle) {
  if (trace.rows.empty()) fail(ErrorCode::invalid_argument, "summarize: empty trace");
  RunSummary s;
  s.seed = trace.seed;
  s.f0 = trace.f0;
  s.final_f = trace.rows.back().f_val;
  s.min_f = std::numeric_limits<double>::infinity();
  s.min_grad_norm_sq = std::numeric_limits<double>::infinity();
  for (const auto& r : trace.rows) {
    s.min_f = std::min(s.min_f, r.f_val);
    s.min_grad_norm_sq = std::min(s.min_grad_norm_sq, r.grad_norm_sq);
    if (r.test_loss) {
      s.best_test_loss = std::min(s.best_test_loss.value_or(*r.test_loss), *r.test_loss);
    }
  }
  if (trace.test_loss0 && s.best_test_loss) {
    s.best_test_loss = std::min(*s.best_test_loss, *trace.test_loss0);
  }
  s.final_test_loss = trace.rows.back().test_loss;
  s.final_err_norm_sq = trace.rows.back().err_norm_sq;
  s.empirical_delta = trace.empirical_delta;
  if (trace.x_average) s.avg_iterate_loss = oracle.loss_value(*trace.x_average);
  s.bits_total = trace.rows.back().bits_cum;
  return s;
}

}  // namespace eflab
