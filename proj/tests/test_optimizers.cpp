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

#include "eflab/error.hpp"
#include "eflab/optimizers.hpp"

using namespace eflab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

std::unique_ptr<Oracle> make(OracleKind kind, std::size_t d = 10) {
  OracleParams p;
  p.kind = kind;
  p.d = d;
  p.n = kind == OracleKind::theorem1 ? 0 : 30;
  return build_oracle(p, 7);
}

}  // namespace

TEST_CASE("init_state") {
  const auto st = init_state(OptimizerSpec::simple(Rule::sgd, 0.1), vec({1, 1}));
  CHECK(st.x == vec({1, 1}));
  CHECK(st.e == vec({0, 0}));
  CHECK(st.m == vec({0, 0}));
  CHECK(st.t == 0);
  const auto ec = init_state(OptimizerSpec::ec_sgd(CompressorSpec::sign_scaled(), 1.0),
                             Vector::Zero(3));
  CHECK(ec.e.size() == 3);
  CHECK(ec.x.isZero(0.0));
}

TEST_CASE("one EF step by hand") {
  const auto spec = OptimizerSpec::ec_sgd(CompressorSpec::sign_scaled(), 1.0);
  Rng r = make_stream(0, Stream::compressor);
  Vector p;
  const auto st = step(spec, init_state(spec, vec({0, 0})), vec({3, -1}), r, 1.0, &p);
  CHECK(st.x == vec({-2, 2}));
  CHECK(st.e == vec({1, 1}));
  CHECK(p == vec({3, -1}));
  CHECK(st.t == 1);
}

TEST_CASE("one signum step by hand") {
  const auto spec = OptimizerSpec::simple(Rule::signum, 0.1, 0.9);
  Rng r = make_stream(0, Stream::compressor);
  const auto st = step(spec, init_state(spec, vec({0, 0})), vec({1, -2}), r);
  CHECK(st.m == vec({1, -2}));
  CHECK(st.x == vec({-0.1, 0.1}));
  const auto st2 = step(spec, st, vec({-3, 0}), r);
  // m = (-3, 0) + 0.9 (1, -2) = (-2.1, -1.8)
  CHECK(st2.m[0] == doctest::Approx(-2.1));
  CHECK(st2.m[1] == doctest::Approx(-1.8));
  CHECK(st2.x == vec({0.0, 0.2}));
}

TEST_CASE("baseline rules by hand") {
  Rng r = make_stream(0, Stream::compressor);
  const Vector x = vec({1, 1});
  const Vector g = vec({3, -1});
  auto go = [&](OptimizerSpec s) { return step(s, init_state(s, x), g, r); };
  CHECK(go(OptimizerSpec::simple(Rule::sgd, 0.5)).x == vec({-0.5, 1.5}));
  CHECK(go(OptimizerSpec::simple(Rule::sign_sgd, 0.5)).x == vec({0.5, 1.5}));
  CHECK(go(OptimizerSpec::simple(Rule::sign_sgd_scaled, 0.5)).x == vec({0.0, 2.0}));
  const auto mom = OptimizerSpec::simple(Rule::sgd_momentum, 0.5, 0.5);
  const auto s1 = step(mom, init_state(mom, x), g, r);
  const auto s2 = step(mom, s1, g, r);
  CHECK(s2.m == vec({4.5, -1.5}));
  CHECK(s2.x == vec({-2.75, 2.25}));
}

TEST_CASE("identity compressor reproduces sgd") {
  const auto o = make(OracleKind::ce3);
  const Vector x0 = vec({1, 1});
  std::vector<Vector> a, b;
  run(OptimizerSpec::ec_sgd(CompressorSpec::identity(), 0.01), *o, x0, 100, 3, {},
      [&](const StepEvent& ev) {
        a.push_back(ev.state.x);
        CHECK(ev.state.e.isZero(0.0));
      });
  run(OptimizerSpec::simple(Rule::sgd, 0.01), *o, x0, 100, 3, {},
      [&](const StepEvent& ev) { b.push_back(ev.state.x); });
  REQUIRE(a.size() == 100);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK((a[i] - b[i]).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("sign_sgd on ce2 stays on x1 + x2 = 2") {
  const auto o = make(OracleKind::ce2);
  for (const double gamma : {1e-5, 3.16e-4, 0.01, 0.316, 10.0}) {
    bool on_line = true;
    run(OptimizerSpec::simple(Rule::sign_sgd, gamma), *o, vec({1, 1}), 2000, 1, {},
        [&](const StepEvent& ev) { on_line = on_line && ev.state.x[0] + ev.state.x[1] == 2.0; });
    CHECK(on_line);
  }
}

TEST_CASE("sign_sgd on ce1 drifts to the upper box boundary") {
  const auto o = make(OracleKind::ce1);
  auto spec = OptimizerSpec::simple(Rule::sign_sgd, 0.01);
  spec.projection = Box{-1.0, 1.0};
  RecordingOptions rec;
  rec.every = 10000;
  double mean_x = 0.0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    mean_x += run(spec, *o, vec({0}), 10000, s, rec).final_state.x[0] / 20.0;
  }
  CHECK(mean_x > 0.95);
}

TEST_CASE("run records rows, decimates and averages") {
  const auto o = make(OracleKind::sparse_noise, 5);
  RecordingOptions rec;
  rec.every = 10;
  rec.dense_prefix = 3;
  rec.average = true;
  const auto spec = OptimizerSpec::ec_sgd(CompressorSpec::top_k(2), 0.1);
  const Trace tr = run(spec, *o, Vector::Ones(5), 25, 4, rec);
  std::vector<std::uint64_t> ts;
  for (const auto& r : tr.rows) ts.push_back(r.t);
  CHECK(ts == std::vector<std::uint64_t>{1, 2, 3, 10, 20, 25});
  CHECK(tr.rows.back().bits_cum == 25 * bits_per_step(spec, 5));
  REQUIRE(tr.x_average.has_value());
  CHECK(tr.rows[0].phi_p.has_value());
  REQUIRE(tr.empirical_delta.has_value());
  CHECK(*tr.empirical_delta >= 0.4 - 1e-12);

  // Decimation: after step 2 the step size is 10x smaller.
  const auto sgd = OptimizerSpec::simple(Rule::sign_sgd, 1.0);
  RecordingOptions dec;
  dec.full_batch = true;
  dec.decimate_at = {2};
  std::vector<double> xs;
  const auto q = make(OracleKind::ce1);
  run(sgd, *q, vec({0}), 3, 1, dec, [&](const StepEvent& ev) { xs.push_back(ev.state.x[0]); });
  CHECK(xs[0] == doctest::Approx(-1.0));
  CHECK(xs[1] == doctest::Approx(-2.0));
  CHECK(xs[2] == doctest::Approx(-2.1));
}

TEST_CASE("identical inputs give identical traces") {
  const auto o = make(OracleKind::least_squares, 6);
  const auto spec = OptimizerSpec::ec_sgd(CompressorSpec::rand_k_feedback(2), 0.05);
  const Trace a = run(spec, *o, Vector::Ones(6), 300, 9);
  const Trace b = run(spec, *o, Vector::Ones(6), 300, 9);
  CHECK(a.final_state.x == b.final_state.x);
  CHECK(a.final_state.e == b.final_state.e);
  const Trace c = run(spec, *o, Vector::Ones(6), 300, 10);
  CHECK(a.final_state.x != c.final_state.x);
}

TEST_CASE("validation and failure modes") {
  CHECK_THROWS_AS(OptimizerSpec::simple(Rule::sgd, -1.0).validate(2), Error);
  try {
    OptimizerSpec::simple(Rule::sgd, 0.0).validate(2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("gamma") != std::string::npos);
  }
  CHECK_THROWS_AS(OptimizerSpec::simple(Rule::signum, 0.1, 1.0).validate(2), Error);
  CHECK_THROWS_AS(OptimizerSpec::ec_sgd(CompressorSpec::top_k(3), 0.1).validate(2), Error);
  CHECK_THROWS_AS(parse_rule("adam"), Error);
  CHECK(parse_projection("none") == std::nullopt);
  CHECK(*parse_projection("box:-1:1") == Box{-1.0, 1.0});
  CHECK_THROWS_AS(parse_projection("box:1:-1"), Error);

  // Divergence is reported, not silently continued.
  const auto o = make(OracleKind::least_squares, 4);
  CHECK_THROWS_AS(run(OptimizerSpec::simple(Rule::sgd, 1e6), *o, Vector::Ones(4), 5000, 1),
                  Error);
}
