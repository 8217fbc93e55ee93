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
#include "eflab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "eflab/compressors.hpp"
#include "eflab/error.hpp"

namespace eflab {

namespace {

struct OracleKindName {
  OracleKind kind;
  std::string_view name;
};

constexpr OracleKindName kOracleNames[] = {
    {OracleKind::ce1, "ce1"},
    {OracleKind::ce2, "ce2"},
    {OracleKind::ce3, "ce3"},
    {OracleKind::theorem1, "theorem1"},
    {OracleKind::sparse_noise, "sparse_noise"},
    {OracleKind::wilson, "wilson"},
    {OracleKind::least_squares, "least_squares"},
};

void require_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    fail(ErrorCode::invalid_argument,
         fmt::format("epsilon must lie in (0, 1), got {}", eps));
  }
}

DenseMatrix select_rows(const DenseMatrix& a, const std::vector<std::size_t>& rows) {
  DenseMatrix out(static_cast<Eigen::Index>(rows.size()), a.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = a.row(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

Vector select_entries(const Vector& v, const std::vector<std::size_t>& rows) {
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out[static_cast<Eigen::Index>(r)] = v[static_cast<Eigen::Index>(rows[r])];
  }
  return out;
}

}  // namespace

OracleKind parse_oracle_kind(std::string_view text) {
  for (const auto& kn : kOracleNames) {
    if (kn.name == text) return kn.kind;
  }
  fail(ErrorCode::invalid_argument, fmt::format("unknown oracle kind '{}'", text));
}

std::string_view to_string(OracleKind kind) {
  for (const auto& kn : kOracleNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "?";
}

void Oracle::check_dim(const Vector& x, std::string_view what) const {
  if (static_cast<std::size_t>(x.size()) != dim()) {
    fail(ErrorCode::dimension_mismatch,
         fmt::format("{}: point has dimension {}, oracle has {}", what, x.size(), dim()));
  }
}

// ---------------------------------------------------------------------------
// ce1

Ce1Oracle::Ce1Oracle() {
  // E g^2 = 16/4 + 3/4
  meta_.sigma_sq = 4.75;
  meta_.smooth_L = 0.0;
  meta_.f_star = -0.25;
  meta_.x_star = Vector::Constant(1, -1.0);
  meta_.domain = Box{-1.0, 1.0};
}

double Ce1Oracle::loss_value(const Vector& x) const {
  check_dim(x, "ce1");
  return 0.25 * x[0];
}

Vector Ce1Oracle::full_gradient(const Vector& x) const {
  check_dim(x, "ce1");
  return Vector::Constant(1, 0.25);
}

GradientSample Ce1Oracle::sample_gradient(const Vector& x, Rng& rng) const {
  check_dim(x, "ce1");
  std::uniform_int_distribution<int> pick(0, 3);
  const int i = pick(rng);
  return {Vector::Constant(1, i == 0 ? 4.0 : -1.0), static_cast<std::size_t>(i)};
}

// ---------------------------------------------------------------------------
// ce2

Ce2Oracle::Ce2Oracle(double epsilon) : epsilon_(epsilon) {
  require_epsilon(epsilon);
  // Every selected subgradient has the same norm.
  meta_.sigma_sq = (1 + epsilon) * (1 + epsilon) + (1 - epsilon) * (1 - epsilon);
  meta_.f_star = 0.0;
  meta_.x_star = Vector::Zero(2);
}

double Ce2Oracle::loss_value(const Vector& x) const {
  check_dim(x, "ce2");
  return epsilon_ * std::abs(x[0] + x[1]) + std::abs(x[0] - x[1]);
}

Vector Ce2Oracle::full_gradient(const Vector& x) const {
  check_dim(x, "ce2");
  const double s_plus = sgn(x[0] + x[1]);
  const double s_minus = sgn(x[0] - x[1]);
  Vector g(2);
  g << s_plus * epsilon_ + s_minus, s_plus * epsilon_ - s_minus;
  return g;
}

GradientSample Ce2Oracle::sample_gradient(const Vector& x, Rng&) const {
  return {full_gradient(x), std::nullopt};
}

// ---------------------------------------------------------------------------
// least squares family

LeastSquaresOracle::LeastSquaresOracle(OracleKind kind, DenseMatrix a, Vector b,
                                       Scale scale)
    : kind_(kind), a_(std::move(a)), b_(std::move(b)), scale_(scale) {
  if (a_.rows() < 1 || a_.cols() < 1) {
    fail(ErrorCode::invalid_argument, "least squares: empty data matrix");
  }
  if (a_.rows() != b_.size()) {
    fail(ErrorCode::dimension_mismatch, "least squares: rows of A != entries of b");
  }
}

double LeastSquaresOracle::loss_value(const Vector& x) const {
  check_dim(x, "least squares");
  const double ss = (a_ * x - b_).squaredNorm();
  return scale_ == Scale::sum ? ss : ss / static_cast<double>(a_.rows());
}

Vector LeastSquaresOracle::full_gradient(const Vector& x) const {
  check_dim(x, "least squares");
  return (2.0 / static_cast<double>(a_.rows())) * (a_.transpose() * (a_ * x - b_));
}

GradientSample LeastSquaresOracle::sample_gradient(const Vector& x, Rng& rng) const {
  check_dim(x, "least squares");
  std::uniform_int_distribution<Eigen::Index> pick(0, a_.rows() - 1);
  const Eigen::Index i = pick(rng);
  const double r = a_.row(i).dot(x) - b_[i];
  return {(2.0 * r) * a_.row(i).transpose(), static_cast<std::size_t>(i)};
}

double LeastSquaresOracle::second_moment(const Vector& x) const {
  check_dim(x, "least squares");
  const Vector r = a_ * x - b_;
  const Vector row_sq = a_.rowwise().squaredNorm();
  return 4.0 * (r.array().square() * row_sq.array()).sum() /
         static_cast<double>(a_.rows());
}

double LeastSquaresOracle::second_moment_bound(double radius) const {
  // |<a_i,x> - b_i| <= |a_i| R + |b_i| on the ball.
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a_.rows(); ++i) {
    const double an = a_.row(i).norm();
    const double r = an * radius + std::abs(b_[i]);
    acc += 4.0 * r * r * an * an;
  }
  return acc / static_cast<double>(a_.rows());
}

void LeastSquaresOracle::set_meta_from_data() {
  const double n = static_cast<double>(a_.rows());
  // Hessian of the mean objective is (2/n) A^T A; of the sum, 2 A^T A.
  const double lam = max_gram_eigenvalue(a_);
  meta_.smooth_L = scale_ == Scale::sum ? 2.0 * lam : 2.0 * lam / n;
}

Ce3Oracle::Ce3Oracle(double epsilon, double region_radius)
    : LeastSquaresOracle(OracleKind::ce3, DenseMatrix(2, 2), Vector::Zero(2),
                         Scale::sum) {
  require_epsilon(epsilon);
  a1_ = Vector(2);
  a2_ = Vector(2);
  a1_ << 1.0 + epsilon, -1.0 + epsilon;
  a2_ << -1.0 + epsilon, 1.0 + epsilon;
  a_.row(0) = a1_.transpose();
  a_.row(1) = a2_.transpose();
  set_meta_from_data();
  meta_.f_star = 0.0;
  meta_.x_star = Vector::Zero(2);
  meta_.region_radius = region_radius;
  meta_.sigma_sq = second_moment_bound(region_radius);
}

Theorem1Oracle::Theorem1Oracle(std::vector<int> sign_pattern, std::size_t n, Rng& rng)
    : LeastSquaresOracle(OracleKind::theorem1, DenseMatrix(1, 1), Vector::Zero(1),
                         Scale::mean) {
  const std::size_t d = sign_pattern.size();
  if (d < 2) fail(ErrorCode::invalid_argument, "theorem1: d must be >= 2");
  for (int s : sign_pattern) {
    if (s != 1 && s != -1) {
      fail(ErrorCode::invalid_argument, "theorem1: sign pattern entries must be +-1");
    }
  }
  if (n < d) fail(ErrorCode::invalid_argument, "theorem1: need n >= d for a unique optimum");
  s_ = Vector(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) s_[static_cast<Eigen::Index>(j)] = sign_pattern[j];

  std::uniform_real_distribution<double> magnitude(0.5, 1.5);
  std::bernoulli_distribution flip(0.5);
  std::normal_distribution<double> target(0.0, 1.0);
  a_ = DenseMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  b_ = Vector(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a_.rows(); ++i) {
    const double eta = flip(rng) ? 1.0 : -1.0;
    for (Eigen::Index j = 0; j < a_.cols(); ++j) {
      a_(i, j) = eta * magnitude(rng) * s_[j];
    }
    b_[i] = target(rng);
  }
  set_meta_from_data();
  const Vector x_star = normal_equations_solution(a_, b_);
  meta_.x_star = x_star;
  meta_.f_star = loss_value(x_star);
  meta_.region_radius = 2.0 * x_star.norm() + 1.0;
  meta_.sigma_sq = second_moment_bound(*meta_.region_radius);
}

bool Theorem1Oracle::sign_pattern_holds() const {
  for (Eigen::Index i = 0; i < a_.rows(); ++i) {
    const Vector sg = sign_vector(a_.row(i).transpose());
    if (sg != s_ && sg != -s_) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// sparse noise quadratic

SparseNoiseOracle::SparseNoiseOracle(std::size_t d, double noise_std, double region_radius)
    : d_(d), noise_std_(noise_std) {
  if (d < 1) fail(ErrorCode::invalid_argument, "sparse_noise: d must be >= 1");
  if (!(noise_std >= 0.0)) fail(ErrorCode::invalid_argument, "sparse_noise: noise_std < 0");
  meta_.smooth_L = 1.0;
  meta_.f_star = 0.0;
  meta_.x_star = Vector::Zero(static_cast<Eigen::Index>(d));
  meta_.region_radius = region_radius;
  meta_.sigma_sq = region_radius * region_radius + noise_std * noise_std;
}

double SparseNoiseOracle::loss_value(const Vector& x) const {
  check_dim(x, "sparse_noise");
  return 0.5 * x.squaredNorm();
}

Vector SparseNoiseOracle::full_gradient(const Vector& x) const {
  check_dim(x, "sparse_noise");
  return x;
}

GradientSample SparseNoiseOracle::sample_gradient(const Vector& x, Rng& rng) const {
  check_dim(x, "sparse_noise");
  Vector g = x;
  if (noise_std_ > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_std_);
    g[0] += noise(rng);
  }
  return {std::move(g), std::nullopt};
}

// ---------------------------------------------------------------------------
// over-parameterized least squares

WilsonData generate_wilson(std::size_t n, Rng& rng) {
  if (n < 2 || n % 2 != 0) {
    fail(ErrorCode::invalid_argument, "wilson: n must be even and >= 2");
  }
  const std::size_t d = 6 * n;
  WilsonData data;
  data.a = DenseMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  data.y = Vector(static_cast<Eigen::Index>(n));
  std::bernoulli_distribution label(0.5);
  for (std::size_t i = 0; i < n; ++i) {
    data.y[static_cast<Eigen::Index>(i)] = label(rng) ? 1.0 : -1.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double yi = data.y[r];
    data.a(r, 0) = yi;
    data.a(r, 1) = 1.0;
    data.a(r, 2) = 1.0;
    // 1-based column 4 + 5(i-1) is 0-based 3 + 5i for 0-based row i.
    const auto first = static_cast<Eigen::Index>(3 + 5 * i);
    const auto count = static_cast<Eigen::Index>(2.0 * (1.0 - yi)) + 1;
    for (Eigen::Index c = 0; c < count; ++c) data.a(r, first + c) = 1.0;
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  data.train_rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n / 2));
  data.test_rows.assign(perm.begin() + static_cast<std::ptrdiff_t>(n / 2), perm.end());
  std::sort(data.train_rows.begin(), data.train_rows.end());
  std::sort(data.test_rows.begin(), data.test_rows.end());
  return data;
}

WilsonOracle::WilsonOracle(WilsonData data)
    : LeastSquaresOracle(OracleKind::wilson, select_rows(data.a, data.train_rows),
                         select_entries(data.y, data.train_rows), Scale::mean),
      data_(std::move(data)) {
  a_test_ = select_rows(data_.a, data_.test_rows);
  y_test_ = select_entries(data_.y, data_.test_rows);
  set_meta_from_data();
  const Vector x_star = min_norm_solution(a_, b_);
  meta_.x_star = x_star;
  meta_.f_star = 0.0;
  meta_.region_radius = 2.0 * x_star.norm() + 1.0;
  meta_.sigma_sq = second_moment_bound(*meta_.region_radius);
}

std::optional<double> WilsonOracle::test_loss(const Vector& x) const {
  check_dim(x, "wilson");
  return (a_test_ * x - y_test_).squaredNorm() / static_cast<double>(a_test_.rows());
}

// ---------------------------------------------------------------------------

std::unique_ptr<Oracle> build_oracle(const OracleParams& p, std::uint64_t seed) {
  Rng rng = make_stream(seed, Stream::oracle_data);
  switch (p.kind) {
    case OracleKind::ce1:
      return std::make_unique<Ce1Oracle>();
    case OracleKind::ce2:
      return std::make_unique<Ce2Oracle>(p.epsilon);
    case OracleKind::ce3:
      return std::make_unique<Ce3Oracle>(p.epsilon, p.region_radius.value_or(std::sqrt(2.0)));
    case OracleKind::theorem1: {
      std::vector<int> s = p.sign_pattern;
      if (s.empty()) {
        if (p.d < 2) fail(ErrorCode::invalid_argument, "theorem1: d must be >= 2");
        std::bernoulli_distribution coin(0.5);
        s.resize(p.d);
        for (auto& v : s) v = coin(rng) ? 1 : -1;
      }
      const std::size_t n = p.n == 0 ? 2 * s.size() : p.n;
      return std::make_unique<Theorem1Oracle>(std::move(s), n, rng);
    }
    case OracleKind::sparse_noise:
      return std::make_unique<SparseNoiseOracle>(
          p.d, p.noise_std,
          p.region_radius.value_or(std::sqrt(static_cast<double>(p.d))));
    case OracleKind::wilson:
      return std::make_unique<WilsonOracle>(generate_wilson(p.n, rng));
    case OracleKind::least_squares: {
      if (p.n < 1 || p.d < 1) fail(ErrorCode::invalid_argument, "least_squares: n, d >= 1");
      std::normal_distribution<double> normal(0.0, 1.0);
      DenseMatrix a(static_cast<Eigen::Index>(p.n), static_cast<Eigen::Index>(p.d));
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = normal(rng);
      }
      Vector b(a.rows());
      for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = normal(rng);
      struct Generic final : LeastSquaresOracle {
        Generic(DenseMatrix a, Vector b, std::optional<double> radius)
            : LeastSquaresOracle(OracleKind::least_squares, std::move(a), std::move(b),
                                 Scale::mean) {
          set_meta_from_data();
          const Vector xs = a_.rows() >= a_.cols() ? normal_equations_solution(a_, b_)
                                                   : min_norm_solution(a_, b_);
          meta_.x_star = xs;
          meta_.f_star = loss_value(xs);
          const double r = radius.value_or(2.0 * xs.norm() + 1.0);
          meta_.region_radius = r;
          meta_.sigma_sq = second_moment_bound(r);
        }
      };
      return std::make_unique<Generic>(std::move(a), std::move(b), p.region_radius);
    }
  }
  fail(ErrorCode::invalid_argument, "build_oracle: unknown kind");
}

}  // namespace eflab
