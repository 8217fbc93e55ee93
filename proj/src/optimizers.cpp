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
#include "eflab/optimizers.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "eflab/error.hpp"

namespace eflab {

namespace {

struct RuleName {
  Rule rule;
  std::string_view name;
};

constexpr RuleName kRuleNames[] = {
    {Rule::ec_sgd, "ec_sgd"},
    {Rule::sgd, "sgd"},
    {Rule::sgd_momentum, "sgd_momentum"},
    {Rule::sign_sgd, "sign_sgd"},
    {Rule::sign_sgd_scaled, "sign_sgd_scaled"},
    {Rule::signum, "signum"},
};

bool has_momentum(Rule r) { return r == Rule::sgd_momentum || r == Rule::signum; }

double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorCode::invalid_argument, fmt::format("{}: '{}' is not a number", what, text));
  }
  return v;
}

}  // namespace

Rule parse_rule(std::string_view text) {
  for (const auto& rn : kRuleNames) {
    if (rn.name == text) return rn.rule;
  }
  fail(ErrorCode::invalid_argument, fmt::format("unknown optimizer rule '{}'", text));
}

std::string_view to_string(Rule rule) {
  for (const auto& rn : kRuleNames) {
    if (rn.rule == rule) return rn.name;
  }
  return "?";
}

void OptimizerSpec::validate(std::size_t d) const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    fail(ErrorCode::invalid_argument, fmt::format("gamma must be > 0, got {}", gamma));
  }
  if (!(beta >= 0.0 && beta < 1.0)) {
    fail(ErrorCode::invalid_argument, fmt::format("beta must lie in [0, 1), got {}", beta));
  }
  if (projection && !(projection->lo <= projection->hi)) {
    fail(ErrorCode::invalid_argument, "projection box needs lo <= hi");
  }
  if (rule == Rule::ec_sgd) compressor.validate(d);
}

std::string OptimizerSpec::describe() const {
  std::string out(to_string(rule));
  if (rule == Rule::ec_sgd) out += fmt::format("({})", compressor.to_string());
  out += fmt::format(" gamma={}", gamma);
  if (has_momentum(rule)) out += fmt::format(" beta={}", beta);
  return out;
}

std::optional<Box> parse_projection(std::string_view text) {
  if (text == "none" || text.empty()) return std::nullopt;
  if (!text.starts_with("box:")) {
    fail(ErrorCode::invalid_argument,
         fmt::format("projection must be none or box:LO:HI, got '{}'", text));
  }
  const std::string_view rest = text.substr(4);
  const auto colon = rest.find(':');
  if (colon == std::string_view::npos) {
    fail(ErrorCode::invalid_argument,
         fmt::format("projection must be none or box:LO:HI, got '{}'", text));
  }
  Box box{parse_double(rest.substr(0, colon), "projection"),
          parse_double(rest.substr(colon + 1), "projection")};
  if (!(box.lo <= box.hi)) fail(ErrorCode::invalid_argument, "projection box needs lo <= hi");
  return box;
}

std::string projection_to_string(const std::optional<Box>& box) {
  if (!box) return "none";
  return fmt::format("box:{}:{}", box->lo, box->hi);
}

OptimizerState init_state(const OptimizerSpec&, const Vector& x0) {
  require_finite(x0, "init_state");
  if (x0.size() < 1) fail(ErrorCode::invalid_argument, "init_state: empty x0");
  OptimizerState st;
  st.x = x0;
  st.e = Vector::Zero(x0.size());
  st.m = Vector::Zero(x0.size());
  st.t = 0;
  return st;
}

OptimizerState step(const OptimizerSpec& spec, const OptimizerState& st, const Vector& g,
                    Rng& rng, double gamma_scale, Vector* p_out) {
  require_same_dim(st.x, g, "step");
  require_finite(g, "step: gradient");
  const double gamma = spec.gamma * gamma_scale;
  const double d = static_cast<double>(g.size());
  OptimizerState next = st;
  switch (spec.rule) {
    case Rule::sgd:
      next.x -= gamma * g;
      break;
    case Rule::sgd_momentum:
      next.m = g + spec.beta * st.m;
      next.x -= gamma * next.m;
      break;
    case Rule::sign_sgd:
      next.x -= gamma * sign_vector(g, spec.sign_zero);
      break;
    case Rule::sign_sgd_scaled:
      next.x -= (gamma * l1_norm(g) / d) * sign_vector(g, spec.sign_zero);
      break;
    case Rule::signum:
      next.m = g + spec.beta * st.m;
      next.x -= gamma * sign_vector(next.m, spec.sign_zero);
      break;
    case Rule::ec_sgd: {
      Vector p = gamma * g + st.e;
      const Vector delta = compress(spec.compressor, p, rng);
      next.x -= delta;
      next.e = p - delta;
      if (p_out) *p_out = std::move(p);
      break;
    }
  }
  if (spec.projection) {
    next.x = next.x.cwiseMax(spec.projection->lo).cwiseMin(spec.projection->hi);
  }
  next.t = st.t + 1;
  return next;
}

std::uint64_t bits_per_step(const OptimizerSpec& spec, std::size_t d) {
  switch (spec.rule) {
    case Rule::ec_sgd:
      return bits_per_step(spec.compressor, d);
    case Rule::sign_sgd:
    case Rule::signum:
      return bits_per_step(CompressorSpec::sign_raw(), d);
    case Rule::sign_sgd_scaled:
      return bits_per_step(CompressorSpec::sign_scaled(), d);
    default:
      return bits_per_step(CompressorSpec::identity(), d);
  }
}

Trace run(const OptimizerSpec& spec, const Oracle& oracle, const Vector& x0, std::size_t T,
          std::uint64_t seed, const RecordingOptions& record, const StepObserver& observer) {
  const std::size_t d = oracle.dim();
  if (T < 1) fail(ErrorCode::invalid_argument, "run: T must be >= 1");
  if (static_cast<std::size_t>(x0.size()) != d) {
    fail(ErrorCode::dimension_mismatch,
         fmt::format("run: x0 has dimension {}, oracle has {}", x0.size(), d));
  }
  if (record.every < 1) fail(ErrorCode::invalid_argument, "run: record.every must be >= 1");
  if (record.span && T > RecordingOptions::kMaxSpanSteps) {
    fail(ErrorCode::invalid_argument,
         fmt::format("run: span recording is limited to T <= {}",
                     RecordingOptions::kMaxSpanSteps));
  }
  spec.validate(d);

  Rng sampling = make_stream(seed, Stream::oracle_sampling);
  Rng compressor_rng = make_stream(seed, Stream::compressor);
  const std::uint64_t bits = bits_per_step(spec, d);
  const bool ec = spec.rule == Rule::ec_sgd;

  Trace trace;
  trace.seed = seed;
  trace.steps = T;
  trace.f0 = oracle.loss_value(x0);
  if (record.test_loss) trace.test_loss0 = oracle.test_loss(x0);

  OptimizerState st = init_state(spec, x0);
  std::optional<SpanBasis> span;
  if (record.span) span.emplace(static_cast<Eigen::Index>(d));
  std::optional<CompensatedSum> avg;
  if (record.average) {
    avg.emplace(static_cast<Eigen::Index>(d));
    avg->add(x0);
  }
  Vector p;
  std::optional<double> last_phi;
  std::size_t next_decimation = 0;
  double gamma_scale = 1.0;
  std::vector<std::uint64_t> decimate_at = record.decimate_at;
  std::sort(decimate_at.begin(), decimate_at.end());

  for (std::size_t t = 0; t < T; ++t) {
    while (next_decimation < decimate_at.size() && decimate_at[next_decimation] <= t) {
      gamma_scale *= record.decimate_factor;
      ++next_decimation;
    }
    const Vector g = record.full_batch ? oracle.full_gradient(st.x)
                                       : oracle.sample_gradient(st.x, sampling).g;
    if (span) span->extend(g);
    st = step(spec, st, g, compressor_rng, gamma_scale, ec ? &p : nullptr);
    if (!st.x.allFinite() || !st.e.allFinite() || !st.m.allFinite()) {
      fail(ErrorCode::numeric_failure,
           fmt::format("run: non-finite iterate at step {} ({})", t + 1, spec.describe()));
    }
    if (ec) {
      if (p.squaredNorm() > 0.0) {
        const double dlt = contraction_delta(p, p - st.e);
        trace.empirical_delta = std::min(trace.empirical_delta.value_or(1.0), dlt);
        last_phi = record.phi ? std::optional<double>(density_phi(p)) : std::nullopt;
      } else {
        last_phi.reset();
      }
    }
    if (avg) avg->add(st.x);
    if (observer) observer(StepEvent{st.t, st, g, ec ? &p : nullptr});

    const std::uint64_t tt = st.t;
    if (tt <= record.dense_prefix || tt % record.every == 0 || tt == T) {
      TraceRow row;
      row.t = tt;
      row.f_val = oracle.loss_value(st.x);
      row.grad_norm_sq = oracle.full_gradient(st.x).squaredNorm();
      row.err_norm_sq = st.e.squaredNorm();
      row.phi_p = last_phi;
      if (span) row.span_dist = span->distance(st.x);
      row.bits_cum = tt * bits;
      if (record.test_loss) row.test_loss = oracle.test_loss(st.x);
      trace.rows.push_back(row);
    }
  }
  if (avg) trace.x_average = avg->value() / static_cast<double>(T + 1);
  trace.final_state = std::move(st);
  return trace;
}

}  // namespace eflab
