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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eflab/compressors.hpp"
#include "eflab/error.hpp"
#include "eflab/linalg.hpp"
#include "eflab/oracles.hpp"

using namespace eflab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

std::unique_ptr<Oracle> make(OracleKind kind, std::size_t d = 100, std::size_t n = 200,
                             std::uint64_t seed = 0) {
  OracleParams p;
  p.kind = kind;
  p.d = d;
  p.n = n;
  return build_oracle(p, seed);
}

}  // namespace

TEST_CASE("ce1 definition") {
  const auto o = make(OracleKind::ce1);
  CHECK(o->dim() == 1);
  CHECK(o->loss_value(vec({0.4})) == doctest::Approx(0.1));
  CHECK(o->full_gradient(vec({0.7})) == vec({0.25}));
  CHECK(o->full_gradient(vec({-0.3})) == vec({0.25}));
  CHECK(*o->meta().sigma_sq == doctest::Approx(4.75));
  CHECK(*o->meta().x_star == vec({-1}));
  CHECK(*o->meta().f_star == doctest::Approx(-0.25));
  REQUIRE(o->meta().domain.has_value());
  CHECK(*o->meta().domain == Box{-1.0, 1.0});
  Rng r = make_stream(1, Stream::oracle_sampling);
  int fours = 0;
  constexpr int kDraws = 40000;
  for (int i = 0; i < kDraws; ++i) {
    const double g = o->sample_gradient(vec({0.0}), r).g[0];
    REQUIRE((g == 4.0 || g == -1.0));
    fours += g == 4.0;
  }
  // Binomial(40000, 1/4): sd ~ 86.6.
  CHECK(std::abs(fours - kDraws / 4) < 5 * 87);
}

TEST_CASE("ce2 values and subgradient convention") {
  const auto o = make(OracleKind::ce2);
  CHECK(o->loss_value(vec({1, 1})) == 1.0);
  CHECK(o->full_gradient(vec({1, 1})) == vec({1.5, -0.5}));
  CHECK(o->full_gradient(vec({2, 0})) == vec({1.5, -0.5}));
  Rng r = make_stream(1, Stream::oracle_sampling);
  CHECK(o->sample_gradient(vec({1, 1}), r).g == vec({1.5, -0.5}));
  CHECK(*o->meta().f_star == 0.0);
}

TEST_CASE("ce3 construction and samples") {
  OracleParams p;
  p.kind = OracleKind::ce3;
  p.epsilon = 0.5;
  const auto o = build_oracle(p, 0);
  const auto& ce3 = dynamic_cast<const Ce3Oracle&>(*o);
  CHECK(ce3.a1() == vec({1.5, -0.5}));
  CHECK(ce3.a2() == vec({-0.5, 1.5}));
  CHECK(*o->meta().x_star == vec({0, 0}));
  CHECK(*o->meta().f_star == 0.0);
  CHECK(o->loss_value(vec({1, 1})) == 2.0);
  CHECK(o->loss_value(vec({0, 0})) == 0.0);

  Rng r = make_stream(4, Stream::oracle_sampling);
  bool saw[2] = {false, false};
  for (int i = 0; i < 200; ++i) {
    const auto s = o->sample_gradient(vec({1, 1}), r);
    REQUIRE(s.component_index.has_value());
    if (*s.component_index == 0) {
      CHECK(s.g == vec({3, -1}));
      saw[0] = true;
    } else {
      CHECK(s.g == vec({-1, 3}));
      saw[1] = true;
    }
  }
  CHECK((saw[0] && saw[1]));
}

TEST_CASE("sparse_noise is 1/2|x|^2 with noise on the first coordinate") {
  const auto o = make(OracleKind::sparse_noise, 100);
  CHECK(o->loss_value(Vector::Zero(100)) == 0.0);
  const Vector x = Vector::LinSpaced(100, -1.0, 1.0);
  CHECK(o->full_gradient(x) == x);
  Rng r = make_stream(2, Stream::oracle_sampling);
  const Vector g = o->sample_gradient(x, r).g;
  CHECK(g.tail(99) == x.tail(99));
  CHECK(*o->meta().smooth_L == 1.0);
}

TEST_CASE("wilson rows follow the construction") {
  Rng r = make_stream(0, Stream::oracle_data);
  const WilsonData w = generate_wilson(200, r);
  REQUIRE(w.a.rows() == 200);
  REQUIRE(w.a.cols() == 1200);
  CHECK(w.train_rows.size() == 100);
  CHECK(w.test_rows.size() == 100);
  for (Eigen::Index i = 0; i < 200; ++i) {
    const double y = w.y[i];
    REQUIRE((y == 1.0 || y == -1.0));
    // Reference row written out from the 1-based definition.
    Vector ref = Vector::Zero(1200);
    ref[0] = y;
    ref[1] = 1.0;
    ref[2] = 1.0;
    const Eigen::Index start = 4 + 5 * i - 1;
    const Eigen::Index len = y > 0 ? 1 : 5;
    for (Eigen::Index j = 0; j < len; ++j) ref[start + j] = 1.0;
    CHECK(w.a.row(i).transpose() == ref);
  }
  std::vector<std::size_t> all = w.train_rows;
  all.insert(all.end(), w.test_rows.begin(), w.test_rows.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
  CHECK_THROWS_AS(generate_wilson(7, r), Error);
}

TEST_CASE("wilson oracle: mean squared losses, min-norm optimum") {
  const auto o = make(OracleKind::wilson, 100, 200, 3);
  const auto& w = dynamic_cast<const WilsonOracle&>(*o);
  CHECK(o->dim() == 1200);
  CHECK(w.data().rows() == 100);
  const Vector zero = Vector::Zero(1200);
  CHECK(o->loss_value(zero) == doctest::Approx(1.0));
  CHECK(*o->test_loss(zero) == doctest::Approx(1.0));
  const Vector& xs = *o->meta().x_star;
  CHECK(o->loss_value(xs) < 1e-20);
  CHECK(o->full_gradient(xs).norm() < 1e-10);
}

TEST_CASE("theorem1 instances: sign pattern and optimum") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    OracleParams p;
    p.kind = OracleKind::theorem1;
    p.d = 2 + seed;
    p.n = 0;
    const auto o = build_oracle(p, seed);
    const auto& th = dynamic_cast<const Theorem1Oracle&>(*o);
    CHECK(th.sign_pattern_holds());
    CHECK(th.data().rows() == static_cast<Eigen::Index>(2 * p.d));
    const Vector& s = th.sign_pattern();
    for (Eigen::Index i = 0; i < th.data().rows(); ++i) {
      const Vector row = th.data().row(i).transpose();
      const Vector sg = sign_vector(row);
      CHECK((sg == s || sg == Vector(-s)));
    }
    CHECK(o->full_gradient(*o->meta().x_star).norm() < 1e-9);
  }
  OracleParams fixed;
  fixed.kind = OracleKind::theorem1;
  fixed.sign_pattern = {1, -1, 1};
  fixed.n = 6;
  const auto o = build_oracle(fixed, 1);
  CHECK(dynamic_cast<const Theorem1Oracle&>(*o).sign_pattern() == vec({1, -1, 1}));
}

TEST_CASE("least squares second moment matches Monte Carlo") {
  const auto o = make(OracleKind::least_squares, 4, 10, 2);
  const auto& ls = dynamic_cast<const LeastSquaresOracle&>(*o);
  const Vector x = vec({0.1, -0.2, 0.3, 0.4});
  Rng r = make_stream(3, Stream::oracle_sampling);
  double m2 = 0.0;
  constexpr int kDraws = 200000;
  for (int i = 0; i < kDraws; ++i) m2 += o->sample_gradient(x, r).g.squaredNorm() / kDraws;
  CHECK(m2 == doctest::Approx(ls.second_moment(x)).epsilon(0.02));
  CHECK(ls.second_moment(x) <= ls.second_moment_bound(x.norm()));
}

TEST_CASE("dimension and kind errors") {
  const auto o = make(OracleKind::ce2);
  CHECK_THROWS_AS(o->loss_value(vec({1, 2, 3})), Error);
  CHECK_THROWS_AS(parse_oracle_kind("ce4"), Error);
  CHECK(to_string(parse_oracle_kind("wilson")) == "wilson");
  OracleParams bad;
  bad.kind = OracleKind::ce3;
  bad.epsilon = 1.5;
  CHECK_THROWS_AS(build_oracle(bad, 0), Error);
}
