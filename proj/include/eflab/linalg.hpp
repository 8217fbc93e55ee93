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
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace eflab {

using Vector = Eigen::VectorXd;
using DenseMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Throws numeric_failure if any entry is NaN or Inf.
void require_finite(const Vector& v, std::string_view what);
bool all_finite(const Vector& v);

/// Throws dimension_mismatch unless a and b have the same length.
void require_same_dim(const Vector& a, const Vector& b, std::string_view what);

double l1_norm(const Vector& v);

/// Orthonormal basis of a growing subspace of R^dim.
///
/// Vectors are added with modified Gram-Schmidt followed by one
/// re-orthogonalization pass. A vector whose residual after projection has
/// norm <= rank_tolerance * max(1, |v|) leaves the basis unchanged, so zero
/// and dependent vectors never extend it.
class SpanBasis {
 public:
  explicit SpanBasis(Eigen::Index dim, double rank_tolerance = 1e-10);

  Eigen::Index dim() const { return dim_; }
  std::size_t rank() const { return basis_.size(); }
  double rank_tolerance() const { return rank_tolerance_; }
  const std::vector<Vector>& basis() const { return basis_; }

  /// Returns true when the basis grew.
  bool extend(const Vector& v);

  Vector project(const Vector& v) const;

  /// |v - project(v)|
  double distance(const Vector& v) const;

 private:
  Vector residual(const Vector& v) const;

  Eigen::Index dim_;
  double rank_tolerance_;
  std::vector<Vector> basis_;
};

SpanBasis span_extend(SpanBasis b, const Vector& v);
Vector project(const SpanBasis& b, const Vector& v);

/// A^T (A A^T)^{-1} y via Cholesky of the Gram matrix. Rank-deficient rows
/// are reported as numeric_failure; no jitter is added.
Vector min_norm_solution(const DenseMatrix& a, const Vector& y);

/// Least-squares solution of a tall full-column-rank system via Cholesky of
/// A^T A.
Vector normal_equations_solution(const DenseMatrix& a, const Vector& b);

/// Largest eigenvalue of A^T A (equivalently of A A^T).
double max_gram_eigenvalue(const DenseMatrix& a);

/// Neumaier-compensated running sum of vectors.
class CompensatedSum {
 public:
  explicit CompensatedSum(Eigen::Index dim)
      : sum_(Vector::Zero(dim)), comp_(Vector::Zero(dim)) {}

  void add(const Vector& v);
  Vector value() const { return sum_ + comp_; }

 private:
  Vector sum_;
  Vector comp_;
};

}  // namespace eflab
