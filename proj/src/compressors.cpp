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
#include "eflab/compressors.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <numeric>

#include <fmt/format.h>

#include "eflab/error.hpp"

namespace eflab {

namespace {

struct KindName {
  CompressorKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {CompressorKind::identity, "identity"},
    {CompressorKind::sign_scaled, "sign_scaled"},
    {CompressorKind::sign_raw, "sign_raw"},
    {CompressorKind::top_k, "top_k"},
    {CompressorKind::rand_k_unbiased, "rand_k_unbiased"},
    {CompressorKind::rand_k_feedback, "rand_k_feedback"},
};

std::string_view kind_name(CompressorKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "?";
}

std::uint64_t ceil_log2(std::size_t d) {
  if (d <= 1) return 0;
  return std::bit_width(static_cast<std::uint64_t>(d - 1));
}

}  // namespace

CompressorSpec CompressorSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  CompressorSpec spec;
  bool found = false;
  for (const auto& kn : kKindNames) {
    if (kn.name == head) {
      spec.kind = kn.kind;
      found = true;
    }
  }
  if (!found) {
    fail(ErrorCode::invalid_argument, fmt::format("unknown compressor '{}'", text));
  }
  if (spec.uses_k()) {
    if (colon == std::string_view::npos) {
      fail(ErrorCode::invalid_argument,
           fmt::format("compressor '{}' needs a k, e.g. {}:4", text, head));
    }
    const std::string_view num = text.substr(colon + 1);
    std::size_t k = 0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
    if (ec != std::errc() || ptr != num.data() + num.size() || k < 1) {
      fail(ErrorCode::invalid_argument,
           fmt::format("compressor '{}': k must be a positive integer", text));
    }
    spec.k = k;
  } else if (colon != std::string_view::npos) {
    fail(ErrorCode::invalid_argument,
         fmt::format("compressor '{}' takes no parameter", head));
  }
  return spec;
}

std::string CompressorSpec::to_string() const {
  if (uses_k()) return fmt::format("{}:{}", kind_name(kind), k);
  return std::string(kind_name(kind));
}

bool CompressorSpec::uses_k() const {
  return kind == CompressorKind::top_k || kind == CompressorKind::rand_k_unbiased ||
         kind == CompressorKind::rand_k_feedback;
}

bool CompressorSpec::is_random() const {
  return kind == CompressorKind::rand_k_unbiased ||
         kind == CompressorKind::rand_k_feedback;
}

void CompressorSpec::validate(std::size_t d) const {
  if (uses_k() && (k < 1 || k > d)) {
    fail(ErrorCode::invalid_argument,
         fmt::format("compressor {}: k must lie in [1, {}]", to_string(), d));
  }
}

std::optional<double> CompressorSpec::guaranteed_delta(std::size_t d) const {
  switch (kind) {
    case CompressorKind::identity:
      return 1.0;
    case CompressorKind::top_k:
    case CompressorKind::rand_k_feedback:
      return static_cast<double>(k) / static_cast<double>(d);
    default:
      return std::nullopt;
  }
}

SignZero parse_sign_zero(std::string_view text) {
  if (text == "plus_one") return SignZero::plus_one;
  if (text == "zero") return SignZero::zero;
  fail(ErrorCode::invalid_argument,
       fmt::format("sign_zero must be plus_one or zero, got '{}'", text));
}

std::string_view to_string(SignZero s) {
  return s == SignZero::plus_one ? "plus_one" : "zero";
}

Vector sign_vector(const Vector& v, SignZero zero) {
  return v.unaryExpr([zero](double x) { return sgn(x, zero); });
}

std::vector<std::size_t> sample_coordinates(std::size_t d, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, d - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  return idx;
}

std::vector<std::size_t> top_k_coordinates(const Vector& v, std::size_t k) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto larger = [&v](std::size_t a, std::size_t b) {
    const double fa = std::abs(v[a]);
    const double fb = std::abs(v[b]);
    return fa > fb || (fa == fb && a < b);
  };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k),
                    idx.end(), larger);
  idx.resize(k);
  return idx;
}

Vector compress(const CompressorSpec& spec, const Vector& v, Rng& rng) {
  const auto d = static_cast<std::size_t>(v.size());
  spec.validate(d);
  require_finite(v, "compress");
  const double dd = static_cast<double>(d);
  switch (spec.kind) {
    case CompressorKind::identity:
      return v;
    case CompressorKind::sign_scaled: {
      const double l1 = l1_norm(v);
      if (l1 == 0.0) return Vector::Zero(v.size());
      return (l1 / dd) * sign_vector(v, spec.sign_zero);
    }
    case CompressorKind::sign_raw: {
      if (v.isZero(0.0)) return Vector::Zero(v.size());
      return sign_vector(v, spec.sign_zero);
    }
    case CompressorKind::top_k: {
      Vector out = Vector::Zero(v.size());
      for (const auto i : top_k_coordinates(v, spec.k)) {
        out[static_cast<Eigen::Index>(i)] = v[static_cast<Eigen::Index>(i)];
      }
      return out;
    }
    case CompressorKind::rand_k_unbiased:
    case CompressorKind::rand_k_feedback: {
      const double scale = spec.kind == CompressorKind::rand_k_unbiased
                               ? dd / static_cast<double>(spec.k)
                               : 1.0;
      Vector out = Vector::Zero(v.size());
      for (const auto i : sample_coordinates(d, spec.k, rng)) {
        out[static_cast<Eigen::Index>(i)] = scale * v[static_cast<Eigen::Index>(i)];
      }
      return out;
    }
  }
  fail(ErrorCode::invalid_argument, "compress: unknown compressor kind");
}

double contraction_delta(const Vector& v, const Vector& c) {
  require_same_dim(v, c, "contraction_delta");
  const double vn = v.squaredNorm();
  if (vn == 0.0) {
    fail(ErrorCode::invalid_argument, "contraction_delta: zero input vector");
  }
  const double delta = 1.0 - (c - v).squaredNorm() / vn;
  return std::clamp(delta, 0.0, 1.0);
}

double density_phi(const Vector& v) {
  const double l2 = v.squaredNorm();
  if (l2 == 0.0) fail(ErrorCode::invalid_argument, "density_phi: zero vector");
  const double l1 = l1_norm(v);
  return l1 * l1 / (static_cast<double>(v.size()) * l2);
}

std::uint64_t bits_per_step(const CompressorSpec& spec, std::size_t d) {
  if (d < 1) fail(ErrorCode::invalid_argument, "bits_per_step: d must be >= 1");
  switch (spec.kind) {
    case CompressorKind::identity:
      return 32 * static_cast<std::uint64_t>(d);
    case CompressorKind::sign_scaled:
    case CompressorKind::sign_raw:
      return static_cast<std::uint64_t>(d) + 32;
    default:
      return static_cast<std::uint64_t>(spec.k) * (32 + ceil_log2(d));
  }
}

}  // namespace eflab
