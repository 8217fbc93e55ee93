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
#include "eflab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "eflab/error.hpp"

namespace eflab {

bool all_finite(const Vector& v) { return v.allFinite(); }

void require_finite(const Vector& v, std::string_view what) {
  if (!v.allFinite()) {
    fail(ErrorCode::numeric_failure, fmt::format("{}: non-finite entry", what));
  }
}

void require_same_dim(const Vector& a, const Vector& b, std::string_view what) {
  if (a.size() != b.size()) {
    fail(ErrorCode::dimension_mismatch,
         fmt::format("{}: dimension {} != {}", what, a.size(), b.size()));
  }
}

double l1_norm(const Vector& v) { return v.cwiseAbs().sum(); }

SpanBasis::SpanBasis(Eigen::Index dim, double rank_tolerance)
    : dim_(dim), rank_tolerance_(rank_tolerance) {
  if (dim < 1) fail(ErrorCode::invalid_argument, "SpanBasis: dim must be >= 1");
  if (!(rank_tolerance > 0.0)) {
    fail(ErrorCode::invalid_argument, "SpanBasis: rank_tolerance must be > 0");
  }
}

Vector SpanBasis::residual(const Vector& v) const {
  Vector r = v;
  // Two MGS sweeps; the second restores orthogonality lost to cancellation.
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis_) r -= q.dot(r) * q;
  }
  return r;
}

bool SpanBasis::extend(const Vector& v) {
  if (v.size() != dim_) {
    fail(ErrorCode::dimension_mismatch,
         fmt::format("span_extend: dimension {} != {}", v.size(), dim_));
  }
  if (rank() >= static_cast<std::size_t>(dim_)) return false;
  const double scale = std::max(1.0, v.norm());
  Vector r = residual(v);
  const double rn = r.norm();
  if (!(rn > rank_tolerance_ * scale)) return false;
  basis_.push_back(r / rn);
  return true;
}

Vector SpanBasis::project(const Vector& v) const {
  if (v.size() != dim_) {
    fail(ErrorCode::dimension_mismatch,
         fmt::format("project: dimension {} != {}", v.size(), dim_));
  }
  Vector p = Vector::Zero(dim_);
  for (const auto& q : basis_) p += q.dot(v) * q;
  return p;
}

double SpanBasis::distance(const Vector& v) const {
  return (v - project(v)).norm();
}

SpanBasis span_extend(SpanBasis b, const Vector& v) {
  b.extend(v);
  return b;
}

Vector project(const SpanBasis& b, const Vector& v) { return b.project(v); }

Vector min_norm_solution(const DenseMatrix& a, const Vector& y) {
  if (a.rows() != y.size()) {
    fail(ErrorCode::dimension_mismatch,
         fmt::format("min_norm_solution: A has {} rows, y has {} entries",
                     a.rows(), y.size()));
  }
  if (a.rows() < 1 || a.cols() < 1) {
    fail(ErrorCode::invalid_argument, "min_norm_solution: empty matrix");
  }
  if (a.rows() > a.cols()) {
    fail(ErrorCode::numeric_failure,
         "min_norm_solution: more rows than columns, rows cannot be independent");
  }
  const Eigen::MatrixXd gram = a * a.transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::numeric_failure,
         "min_norm_solution: Gram matrix is not positive definite (rank-deficient rows)");
  }
  // A dependent row leaves a pivot of rounding size, ~sqrt(rows * eps) relative.
  const Eigen::VectorXd diag = llt.matrixL().toDenseMatrix().diagonal();
  const double max_gram = gram.diagonal().maxCoeff();
  const double rel = 10.0 * std::sqrt(static_cast<double>(a.rows()) *
                                      std::numeric_limits<double>::epsilon());
  if (diag.minCoeff() <= rel * std::sqrt(max_gram)) {
    fail(ErrorCode::numeric_failure,
         "min_norm_solution: Gram matrix is numerically singular");
  }
  const Eigen::VectorXd alpha = llt.solve(y);
  return a.transpose() * alpha;
}

Vector normal_equations_solution(const DenseMatrix& a, const Vector& b) {
  if (a.rows() != b.size()) {
    fail(ErrorCode::dimension_mismatch, "normal_equations_solution: row mismatch");
  }
  const Eigen::MatrixXd gram = a.transpose() * a;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::numeric_failure,
         "normal_equations_solution: columns are linearly dependent");
  }
  return llt.solve(a.transpose() * b);
}

double max_gram_eigenvalue(const DenseMatrix& a) {
  const Eigen::MatrixXd gram = a.rows() <= a.cols()
                                   ? Eigen::MatrixXd(a * a.transpose())
                                   : Eigen::MatrixXd(a.transpose() * a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

void CompensatedSum::add(const Vector& v) {
  for (Eigen::Index i = 0; i < sum_.size(); ++i) {
    const double s = sum_[i];
    const double t = s + v[i];
    if (std::abs(s) >= std::abs(v[i])) {
      comp_[i] += (s - t) + v[i];
    } else {
      comp_[i] += (v[i] - t) + s;
    }
    sum_[i] = t;
  }
}

}  // namespace eflab
