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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eflab/linalg.hpp"
#include "eflab/rng.hpp"

namespace eflab {

struct Box {
  double lo = -1.0;
  double hi = 1.0;
  friend bool operator==(const Box&, const Box&) = default;
};

enum class OracleKind {
  ce1,           // f(x) = x/4 on [-1, 1] with bimodal gradient noise
  ce2,           // eps|x1+x2| + |x1-x2|, deterministic subgradient
  ce3,           // (<a1,x>)^2 + (<a2,x>)^2, one summand per sample
  theorem1,      // sign-aligned data points, shifted quadratic losses
  sparse_noise,  // 1/2 |x|^2 with N(0, s^2) noise on the first coordinate
  wilson,        // over-parameterized least squares with train/test split
  least_squares, // dense Gaussian least squares
};

OracleKind parse_oracle_kind(std::string_view text);
std::string_view to_string(OracleKind kind);

struct OracleMeta {
  std::optional<double> sigma_sq;
  // sigma_sq only holds on the ball |x| <= region_radius.
  std::optional<double> region_radius;
  std::optional<double> smooth_L;
  std::optional<double> f_star;
  std::optional<Vector> x_star;
  std::optional<Box> domain;  // empty means unconstrained
};

struct GradientSample {
  Vector g;
  std::optional<std::size_t> component_index;
};

class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual OracleKind kind() const = 0;
  virtual std::size_t dim() const = 0;
  virtual double loss_value(const Vector& x) const = 0;
  /// Expectation of sample_gradient; for non-smooth kinds the subgradient
  /// selected with sgn(0) = +1.
  virtual Vector full_gradient(const Vector& x) const = 0;
  virtual GradientSample sample_gradient(const Vector& x, Rng& rng) const = 0;
  virtual std::optional<double> test_loss(const Vector&) const { return std::nullopt; }

  const OracleMeta& meta() const { return meta_; }

 protected:
  void check_dim(const Vector& x, std::string_view what) const;

  OracleMeta meta_;
};

struct OracleParams {
  OracleKind kind = OracleKind::ce3;
  double epsilon = 0.5;       // ce2, ce3
  std::size_t n = 200;        // wilson (total rows), least_squares, theorem1 (0 = 2d)
  std::size_t d = 100;        // sparse_noise, theorem1, least_squares
  double noise_std = 100.0;   // sparse_noise
  std::optional<double> region_radius;
  std::vector<int> sign_pattern;  // theorem1; random when empty
};

/// Builds an oracle. `seed` drives the data generation (theorem1, wilson,
/// least_squares); sampling randomness comes from the caller's stream.
std::unique_ptr<Oracle> build_oracle(const OracleParams& params, std::uint64_t seed);

class Ce1Oracle final : public Oracle {
 public:
  Ce1Oracle();
  OracleKind kind() const override { return OracleKind::ce1; }
  std::size_t dim() const override { return 1; }
  double loss_value(const Vector& x) const override;
  Vector full_gradient(const Vector& x) const override;
  GradientSample sample_gradient(const Vector& x, Rng& rng) const override;
};

class Ce2Oracle final : public Oracle {
 public:
  explicit Ce2Oracle(double epsilon);
  OracleKind kind() const override { return OracleKind::ce2; }
  std::size_t dim() const override { return 2; }
  double loss_value(const Vector& x) const override;
  Vector full_gradient(const Vector& x) const override;
  GradientSample sample_gradient(const Vector& x, Rng& rng) const override;

 private:
  double epsilon_;
};

/// f(x) = scale * sum_i (<a_i, x> - b_i)^2 with one uniformly chosen summand
/// per sample: g = 2 (<a_i, x> - b_i) a_i. full_gradient is the mean of the
/// component gradients.
class LeastSquaresOracle : public Oracle {
 public:
  enum class Scale { sum, mean };

  LeastSquaresOracle(OracleKind kind, DenseMatrix a, Vector b, Scale scale);

  OracleKind kind() const override { return kind_; }
  std::size_t dim() const override { return static_cast<std::size_t>(a_.cols()); }
  double loss_value(const Vector& x) const override;
  Vector full_gradient(const Vector& x) const override;
  GradientSample sample_gradient(const Vector& x, Rng& rng) const override;

  const DenseMatrix& data() const { return a_; }
  const Vector& targets() const { return b_; }

  /// Exact E|g|^2 at x.
  double second_moment(const Vector& x) const;
  /// Upper bound of E|g|^2 over |x| <= radius.
  double second_moment_bound(double radius) const;

 protected:
  void set_meta_from_data();

  OracleKind kind_;
  DenseMatrix a_;
  Vector b_;
  Scale scale_;
};

class Ce3Oracle final : public LeastSquaresOracle {
 public:
  Ce3Oracle(double epsilon, double region_radius);
  const Vector& a1() const { return a1_; }
  const Vector& a2() const { return a2_; }

 private:
  Vector a1_, a2_;
};

/// Data points a_i = eta_i (m_i * s) with eta_i in {-1, 1}, m_i > 0 and a
/// fixed sign pattern s; losses l_i(z) = (z - b_i)^2, objective is their mean.
class Theorem1Oracle final : public LeastSquaresOracle {
 public:
  Theorem1Oracle(std::vector<int> sign_pattern, std::size_t n, Rng& rng);
  const Vector& sign_pattern() const { return s_; }
  /// sgn(a_i) == +s or -s for every row, exactly.
  bool sign_pattern_holds() const;

 private:
  Vector s_;
};

class SparseNoiseOracle final : public Oracle {
 public:
  SparseNoiseOracle(std::size_t d, double noise_std, double region_radius);
  OracleKind kind() const override { return OracleKind::sparse_noise; }
  std::size_t dim() const override { return d_; }
  double loss_value(const Vector& x) const override;
  Vector full_gradient(const Vector& x) const override;
  GradientSample sample_gradient(const Vector& x, Rng& rng) const override;
  double noise_std() const { return noise_std_; }

 private:
  std::size_t d_;
  double noise_std_;
};

struct WilsonData {
  DenseMatrix a;  // n x 6n
  Vector y;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

/// Rows follow the over-parameterized construction: A[i,1] = y_i,
/// A[i,2] = A[i,3] = 1, and ones on columns 4+5(i-1) ... 4+5(i-1)+2(1-y_i)
/// (1-based), zero elsewhere. Labels are uniform on {-1, 1}; rows are
/// split at random into equal train and test halves.
WilsonData generate_wilson(std::size_t n, Rng& rng);

/// Mean-squared loss on the training rows; test_loss on the held-out rows.
class WilsonOracle final : public LeastSquaresOracle {
 public:
  WilsonOracle(WilsonData data);
  std::optional<double> test_loss(const Vector& x) const override;

  const WilsonData& full_data() const { return data_; }
  const DenseMatrix& test_data() const { return a_test_; }
  const Vector& test_targets() const { return y_test_; }

 private:
  WilsonData data_;
  DenseMatrix a_test_;
  Vector y_test_;
};

}  // namespace eflab
