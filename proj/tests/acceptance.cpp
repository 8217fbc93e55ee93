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
// Acceptance suite: one pass/fail line per criterion.
//
//   acceptance [--criterion N] [--out DIR]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/QR>
#include <fmt/format.h>

#include "eflab/analysis.hpp"
#include "eflab/csv.hpp"
#include "eflab/error.hpp"
#include "eflab/optimizers.hpp"
#include "eflab/oracles.hpp"
#include "eflab/reproduce.hpp"
#include "eflab/selfcheck.hpp"

using namespace eflab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;
  std::function<Outcome(const fs::path&)> body;
};

Outcome from_verdict(const Verdict& v) {
  std::string detail;
  for (const auto& c : v.checks) {
    if (!detail.empty()) detail += " | ";
    detail += fmt::format("{}{}: {}", c.pass ? "" : "FAILED ", c.name, c.detail);
  }
  return {v.pass(), detail};
}

Outcome via_reproduce(const char* name, const fs::path& out) {
  ReproduceOptions o;
  o.out_dir = out;
  return from_verdict(reproduce(name, o));
}

std::unique_ptr<Oracle> make(OracleKind kind, std::size_t d, std::size_t n,
                             std::uint64_t seed = 0, double noise = 100.0) {
  OracleParams p;
  p.kind = kind;
  p.d = d;
  p.n = n;
  p.noise_std = noise;
  return build_oracle(p, seed);
}

// Seed-mean residual error on ce3 against the bound, at every step.
Outcome residual_error_bound(const fs::path&) {
  const auto o = make(OracleKind::ce3, 2, 2);
  constexpr std::size_t T = 5000;
  constexpr int kSeeds = 20;
  constexpr double kGamma = 0.01;
  constexpr double kSlack = 1.2;
  const auto spec = OptimizerSpec::ec_sgd(CompressorSpec::top_k(1), kGamma);
  const double delta = *spec.compressor.guaranteed_delta(2);
  std::vector<double> mean_e(T, 0.0), mean_g(T, 0.0);
  Vector x0(2);
  x0 << 1.0, 1.0;
  RecordingOptions rec;
  rec.every = T;
  for (int s = 1; s <= kSeeds; ++s) {
    run(spec, *o, x0, T, static_cast<std::uint64_t>(s), rec, [&](const StepEvent& ev) {
      mean_e[ev.t - 1] += ev.state.e.squaredNorm() / kSeeds;
      mean_g[ev.t - 1] += ev.g.squaredNorm() / kSeeds;
    });
  }
  const double sigma_hat = *std::max_element(mean_g.begin(), mean_g.end());
  const double bound = lemma2_bound(kGamma, sigma_hat, delta);
  const double worst = *std::max_element(mean_e.begin(), mean_e.end());
  return {worst <= kSlack * bound,
          fmt::format("max_t seed-mean |e_t|^2 = {:.4g}, 1.2 x bound = {:.4g} "
                      "(sigma_hat^2 = {:.4g}, delta = {})",
                      worst, kSlack * bound, sigma_hat, delta)};
}

// min_t |grad f|^2 on 1/2|x|^2 against the nonconvex rate.
Outcome nonconvex_rate(const fs::path&) {
  const auto o = make(OracleKind::sparse_noise, 100, 0, 0, 0.0);
  constexpr std::size_t T = 10000;
  constexpr int kSeeds = 20;
  constexpr double kSlack = 1.2;
  const double gamma = 1.0 / std::sqrt(static_cast<double>(T + 1));
  const auto spec = OptimizerSpec::ec_sgd(CompressorSpec::top_k(25), gamma);
  const double delta = *spec.compressor.guaranteed_delta(100);
  const Vector x0 = Vector::Ones(100);
  const double f0 = o->loss_value(x0) - *o->meta().f_star;
  double mean_min = 0.0;
  std::vector<double> mean_g(T, 0.0);
  RecordingOptions rec;
  rec.every = T;
  for (int s = 1; s <= kSeeds; ++s) {
    double best = o->full_gradient(x0).squaredNorm();
    run(spec, *o, x0, T, static_cast<std::uint64_t>(s), rec, [&](const StepEvent& ev) {
      if (ev.t < T) best = std::min(best, o->full_gradient(ev.state.x).squaredNorm());
      mean_g[ev.t - 1] += ev.g.squaredNorm() / kSeeds;
    });
    mean_min += best / kSeeds;
  }
  const double sigma_hat = *std::max_element(mean_g.begin(), mean_g.end());
  const double bound = theorem2_bound(f0, *o->meta().smooth_L, sigma_hat, delta, gamma, T);
  return {mean_min <= kSlack * bound,
          fmt::format("seed-mean min |grad|^2 = {:.4g}, 1.2 x bound = {:.4g}", mean_min,
                      kSlack * bound)};
}

const std::vector<CompressorSpec>& all_compressors(std::size_t d) {
  static std::vector<CompressorSpec> v;
  v = {CompressorSpec::identity(),
       CompressorSpec::sign_scaled(),
       CompressorSpec::sign_raw(),
       CompressorSpec::top_k(std::max<std::size_t>(1, d / 4)),
       CompressorSpec::rand_k_unbiased(std::max<std::size_t>(1, d / 4)),
       CompressorSpec::rand_k_feedback(std::max<std::size_t>(1, d / 4))};
  return v;
}

// Recorded span distance never exceeds |e_t|.
Outcome span_vs_error(const fs::path&) {
  constexpr std::size_t T = 2000, kShortT = 60;
  constexpr double kTol = 1e-6;  // relative to 1 + |e_t|
  std::vector<std::pair<std::string, std::unique_ptr<Oracle>>> oracles;
  oracles.emplace_back("ce3", make(OracleKind::ce3, 2, 2));
  oracles.emplace_back("least_squares", make(OracleKind::least_squares, 50, 20, 1));
  oracles.emplace_back("sparse_noise", make(OracleKind::sparse_noise, 100, 0, 1, 1.0));
  oracles.emplace_back("wilson", make(OracleKind::wilson, 0, 40, 1));
  RecordingOptions rec;
  rec.span = true;
  rec.every = 1;
  rec.test_loss = false;
  std::size_t runs = 0, rows = 0, expected = 0;
  double worst = -1e300;
  bool ok = true;
  for (const auto& [name, o] : oracles) {
    for (const auto& c : all_compressors(o->dim())) {
      const double gamma = name == "wilson" ? 0.05 : 0.01;
      // With rand_k_unbiased the error recursion grows by |1 - d/k| on kept
      // coordinates for any gamma, so only a short horizon stays finite.
      const std::size_t steps = c.kind == CompressorKind::rand_k_unbiased ? kShortT : T;
      const Trace tr = run(OptimizerSpec::ec_sgd(c, gamma), *o, Vector::Zero(
                               static_cast<Eigen::Index>(o->dim())),
                           steps, 3, rec);
      ++runs;
      expected += steps;
      for (const auto& r : tr.rows) {
        ++rows;
        const double en = std::sqrt(r.err_norm_sq);
        const double gap = (*r.span_dist - en) / (1.0 + en);
        worst = std::max(worst, gap);
        ok = ok && gap <= kTol;
      }
    }
  }
  return {ok && rows == expected,
          fmt::format("{} runs, {} rows; max((span_dist - |e_t|) / (1 + |e_t|)) = {:.3g}",
                      runs, rows, worst)};
}

// x_t - e_t = x_0 - gamma sum g_i at every step.
Outcome transcript(const fs::path&) {
  std::vector<std::unique_ptr<Oracle>> oracles;
  oracles.push_back(make(OracleKind::ce1, 1, 0));
  oracles.push_back(make(OracleKind::ce2, 2, 0));
  oracles.push_back(make(OracleKind::ce3, 2, 0));
  oracles.push_back(make(OracleKind::theorem1, 5, 0, 1));
  oracles.push_back(make(OracleKind::sparse_noise, 100, 0));
  oracles.push_back(make(OracleKind::wilson, 0, 200));
  oracles.push_back(make(OracleKind::least_squares, 8, 30, 1));
  double worst = 0.0;
  bool ok = true;
  std::size_t checks = 0;
  for (const auto& o : oracles) {
    const auto d = static_cast<Eigen::Index>(o->dim());
    Rng init = make_stream(1, Stream::init);
    std::normal_distribution<double> n01(0.0, 1.0);
    Vector x0(d);
    for (Eigen::Index i = 0; i < d; ++i) x0[i] = o->meta().domain ? 0.0 : n01(init);
    for (const auto& c : all_compressors(o->dim())) {
      const auto spec = OptimizerSpec::ec_sgd(c, 0.01);
      CompensatedSum sum(d);
      double gsum = 0.0;
      run(spec, *o, x0, 1000, 2, {}, [&](const StepEvent& ev) {
        sum.add(ev.g);
        gsum += ev.g.norm();
        const double err = ((ev.state.x - ev.state.e) - (x0 - spec.gamma * sum.value())).norm();
        const double tol = 1e-9 * (1.0 + x0.norm() + spec.gamma * gsum);
        worst = std::max(worst, err / tol);
        ok = ok && err <= tol;
        ++checks;
      });
    }
  }
  return {ok, fmt::format("{} step checks over 7 oracle kinds x 6 compressors; max "
                          "error / tolerance = {:.3g}",
                          checks, worst)};
}

// Full-batch GD on the wilson train split converges to the min-norm solution.
Outcome min_norm_limit(const fs::path&) {
  OracleParams p;
  p.kind = OracleKind::wilson;
  p.n = 200;
  const auto o = build_oracle(p, kFig2DataSeed);
  const auto& w = dynamic_cast<const WilsonOracle&>(*o);
  const Vector target = min_norm_solution(w.data(), w.targets());
  // Independent route: complete orthogonal decomposition pseudo-inverse.
  const Eigen::MatrixXd dense = w.data();
  const Vector pinv = dense.completeOrthogonalDecomposition().solve(Eigen::VectorXd(w.targets()));
  const double gamma = 1.0 / *o->meta().smooth_L;
  const auto spec = OptimizerSpec::simple(Rule::sgd, gamma);
  OptimizerState st = init_state(spec, Vector::Zero(1200));
  Rng unused = make_stream(0, Stream::compressor);
  constexpr std::size_t kMaxSteps = 100000;
  std::size_t steps = 0;
  while (steps < kMaxSteps) {
    const Vector g = o->full_gradient(st.x);
    if (g.norm() <= 1e-13) break;
    st = step(spec, st, g, unused);
    ++steps;
  }
  const double rel = (st.x - target).norm() / target.norm();
  const double rel_pinv = (st.x - pinv).norm() / pinv.norm();
  return {rel <= 1e-5 && rel_pinv <= 1e-5,
          fmt::format("gamma = 1/L = {:.4g}, {} steps; relative distance to Cholesky "
                      "min-norm {:.3g}, to pseudo-inverse {:.3g}",
                      gamma, steps, rel, rel_pinv)};
}

Outcome compressor_contracts(const fs::path&) {
  bool ok = true;
  std::string failed;
  std::size_t n = 0;
  for (const auto& r : check_compressors(2019)) {
    ++n;
    if (!r.pass) {
      ok = false;
      failed += fmt::format(" {} ({})", r.name, r.detail);
    }
  }
  return {ok, ok ? fmt::format("{} checks passed", n) : "failed:" + failed};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const fs::path& out) {
  const fs::path dir = out / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "oracle.kind = least_squares\n"
                        "oracle.d = 20\n"
                        "oracle.n = 50\n"
                        "oracle.data_seed = 3\n"
                        "optimizer.rule = ec_sgd\n"
                        "optimizer.compressor = rand_k_feedback:4\n"
                        "optimizer.gamma = 0.01\n"
                        "run.T = 2000\n"
                        "run.seeds = [1, 2, 3, 4]\n"
                        "run.x0 = gaussian\n"
                        "record.span = true\n"
                        "record.every = 7\n"
                        "record.iterates = true\n";
  ::unsetenv("EF_LAB_SEED");
  for (const char* sub : {"a", "b"}) {
    const std::string cmd = fmt::format("\"{}\" run \"{}\" --out \"{}\" --jobs {} > /dev/null",
                                        EFLAB_CLI, cfg.string(), (dir / sub).string(),
                                        sub[0] == 'a' ? 1 : 3);
    if (std::system(cmd.c_str()) != 0) return {false, "ef-lab run failed: " + cmd};
  }
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    if (e.path().extension() != ".csv") continue;
    ++files;
    const fs::path other = dir / "b" / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
      return {false, fmt::format("{} differs between runs", e.path().filename().string())};
    }
  }
  return {files == 9, fmt::format("{} CSV files byte-identical across two runs (1 vs 3 jobs)",
                                  files)};
}

std::vector<Criterion> criteria() {
  return {
      {1, "ce2: sign_sgd stays on its line, EF escapes", 1.0,
       [](const fs::path& o) { return via_reproduce("ce2", o); }},
      {2, "ce3: sign_sgd trapped, EC sign_scaled converges", 5.0,
       [](const fs::path& o) { return via_reproduce("ce3", o); }},
      {3, "ce1: sign_sgd drifts upward, sgd descends", 5.0,
       [](const fs::path& o) { return via_reproduce("ce1", o); }},
      {4, "theorem1 instances: sign_sgd never nears x*", 10.0,
       [](const fs::path& o) { return via_reproduce("theorem1", o); }},
      {5, "residual error within lemma2_bound (ce3, top_1)", 5.0, residual_error_bound},
      {6, "min gradient norm within theorem2_bound (top_25, d = 100)", 30.0, nonconvex_rate},
      {7, "span distance <= |e_t| on every recorded step", 30.0, span_vs_error},
      {8, "transcript identity x_t - e_t = x_0 - gamma sum g_i", 60.0, transcript},
      {9, "full-batch GD converges to the min-norm solution", 60.0, min_norm_limit},
      {10, "wilson: EF to the span, sign methods stay away", 120.0,
       [](const fs::path& o) { return via_reproduce("fig2_span", o); }},
      {11, "sparse-noise toy: sign_sgd < sgd ~ EF at t = 500", 10.0,
       [](const fs::path& o) { return via_reproduce("toy_a1", o); }},
      {12, "compressor contract suite", 30.0, compressor_contracts},
      {13, "ef-lab run is byte-deterministic", 60.0, determinism},
  };
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  fs::path out = fs::temp_directory_path() / "eflab-acceptance";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (a == "--out" && i + 1 < argc) {
      out = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N] [--out DIR]\n");
      return 2;
    }
  }
  int failed = 0, ran = 0;
  for (const auto& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const fs::path dir = out / fmt::format("c{:02}", c.id);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body(dir);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.time_limit_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("[%s] criterion %2d: %s (%.2f s, limit %.0f s%s) -- %s\n", pass ? "PASS" : "FAIL",
                c.id, c.title, secs, c.time_limit_s, in_time ? "" : ", TOO SLOW",
                o.detail.c_str());
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
