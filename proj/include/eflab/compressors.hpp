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
#include <vector>

#include "eflab/linalg.hpp"
#include "eflab/rng.hpp"

namespace eflab {

enum class CompressorKind {
  identity,
  sign_scaled,      // (|v|_1 / d) sgn(v)
  sign_raw,         // sgn(v)
  top_k,            // keep the k largest |v_i|
  rand_k_unbiased,  // (d/k) * v on k uniform coordinates
  rand_k_feedback,  // v on k uniform coordinates
};

// Value of sgn(0).
enum class SignZero { plus_one, zero };

struct CompressorSpec {
  CompressorKind kind = CompressorKind::identity;
  std::size_t k = 0;  // only for the k-family
  SignZero sign_zero = SignZero::plus_one;

  static CompressorSpec identity() { return {}; }
  static CompressorSpec sign_scaled() { return {CompressorKind::sign_scaled, 0}; }
  static CompressorSpec sign_raw() { return {CompressorKind::sign_raw, 0}; }
  static CompressorSpec top_k(std::size_t k) { return {CompressorKind::top_k, k}; }
  static CompressorSpec rand_k_unbiased(std::size_t k) {
    return {CompressorKind::rand_k_unbiased, k};
  }
  static CompressorSpec rand_k_feedback(std::size_t k) {
    return {CompressorKind::rand_k_feedback, k};
  }

  /// Parses "identity", "sign_scaled", "sign_raw", "top_k:K",
  /// "rand_k_unbiased:K", "rand_k_feedback:K".
  static CompressorSpec parse(std::string_view text);
  std::string to_string() const;

  bool uses_k() const;
  bool is_random() const;

  /// Throws invalid_argument if k is outside [1, d] for the k-family.
  void validate(std::size_t d) const;

  /// Worst-case delta that holds for every input (in expectation for
  /// rand_k_feedback). Empty for sign kinds (input-dependent) and for
  /// rand_k_unbiased (not a contraction).
  std::optional<double> guaranteed_delta(std::size_t d) const;

  friend bool operator==(const CompressorSpec&, const CompressorSpec&) = default;
};

SignZero parse_sign_zero(std::string_view text);
std::string_view to_string(SignZero s);

inline double sgn(double v, SignZero zero = SignZero::plus_one) {
  if (v > 0.0) return 1.0;
  if (v < 0.0) return -1.0;
  return zero == SignZero::plus_one ? 1.0 : 0.0;
}

Vector sign_vector(const Vector& v, SignZero zero = SignZero::plus_one);

/// k distinct coordinates of [0, d), uniformly, via a Fisher-Yates prefix.
std::vector<std::size_t> sample_coordinates(std::size_t d, std::size_t k, Rng& rng);

/// Indices of the k largest |v_i|; ties go to the lower index.
std::vector<std::size_t> top_k_coordinates(const Vector& v, std::size_t k);

/// C(v). The rng is consumed only by the rand_k kinds. C(0) = 0 for all kinds.
Vector compress(const CompressorSpec& spec, const Vector& v, Rng& rng);

/// 1 - |c - v|^2 / |v|^2 clamped to [0, 1]; v must be nonzero.
double contraction_delta(const Vector& v, const Vector& c);

/// |v|_1^2 / (d |v|_2^2), in [1/d, 1] for nonzero v.
double density_phi(const Vector& v);

/// Bits sent per step for a single d-dimensional layer.
std::uint64_t bits_per_step(const CompressorSpec& spec, std::size_t d);

}  // namespace eflab
