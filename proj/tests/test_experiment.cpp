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

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "eflab/config.hpp"
#include "eflab/csv.hpp"
#include "eflab/error.hpp"
#include "eflab/experiment.hpp"
#include "eflab/svg.hpp"

using namespace eflab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("eflab-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error(std::string_view text) {
  try {
    parse_config(text, "cfg");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config_error);
    return e.what();
  }
  FAIL("expected a config error");
  return {};
}

}  // namespace

TEST_CASE("learning-rate grid") {
  const auto g = LrGrid{}.values();
  REQUIRE(g.size() == 9);
  CHECK(g[0] == doctest::Approx(1e-5));
  CHECK(g[1] == doctest::Approx(5.62e-5).epsilon(1e-3));
  CHECK(g[2] == doctest::Approx(3.16e-4).epsilon(1e-3));
  CHECK(g[8] == doctest::Approx(10.0));
  LrGrid one;
  one.points = 1;
  CHECK(one.values() == std::vector<double>{1e-5});
}

TEST_CASE("config grammar") {
  const auto cfg = parse_config(R"(
# comment line
oracle.kind = ce3
oracle.epsilon = 0.25    # trailing comment
optimizer.rule = ec_sgd
optimizer.compressor = "top_k:1"
optimizer.gamma = 1e-2
run.T = 50
run.seeds = [3, 1, 2]
run.x0 = [1, 1]
record.every = 5
output.dir = "out dir # not a comment"
sweep.rules = sgd, ec_sgd:sign_scaled
)");
  CHECK(cfg.oracle.kind == OracleKind::ce3);
  CHECK(cfg.oracle.epsilon == 0.25);
  CHECK(cfg.optimizer.rule == Rule::ec_sgd);
  CHECK(cfg.optimizer.compressor == CompressorSpec::top_k(1));
  CHECK(cfg.optimizer.gamma == 0.01);
  CHECK(cfg.T == 50);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 1, 2});
  CHECK(cfg.x0.kind == InitSpec::Kind::values);
  CHECK(cfg.record.every == 5);
  CHECK(cfg.output_dir == "out dir # not a comment");
  CHECK(cfg.sweep_rules == std::vector<std::string>{"sgd", "ec_sgd:sign_scaled"});

  // Canonical rendering parses back to the same rendering.
  const std::string text = render_config(cfg);
  CHECK(render_config(parse_config(text)) == text);
}

TEST_CASE("config errors name the field and line") {
  std::string msg = config_error("oracle.kind = ce3\noptimizer.gamma = -1\n");
  CHECK(msg.find("cfg:2") != std::string::npos);
  CHECK(msg.find("optimizer.gamma") != std::string::npos);

  msg = config_error("run.T = 10\nrun.tee = 3\n");
  CHECK(msg.find("cfg:2") != std::string::npos);
  CHECK(msg.find("run.tee") != std::string::npos);
  CHECK(msg.find("unknown key") != std::string::npos);

  msg = config_error("run.T = ten\n");
  CHECK(msg.find("cfg:1: run.T") != std::string::npos);

  CHECK(config_error("oracle.kind\n").find("cfg:1") != std::string::npos);
  CHECK(config_error("run.T = 1\nrun.T = 2\n").find("duplicate") != std::string::npos);
  CHECK(config_error("run.seeds = [1, 1]\n").find("run.seeds") != std::string::npos);
  CHECK(config_error("run.seeds = [1, 2\n").find("unterminated") != std::string::npos);
  CHECK(config_error("optimizer.rule = adam\n").find("optimizer.rule") != std::string::npos);
  CHECK(config_error("run.T = 0\n").find("run.T") != std::string::npos);
  CHECK(config_error("T = 4\n").find("namespace") != std::string::npos);
  CHECK(config_error("record.span = true\nrun.T = 6000\n").find("record.span") !=
        std::string::npos);
}

TEST_CASE("EF_LAB_SEED parsing") {
  ::setenv("EF_LAB_SEED", "4, 5", 1);
  CHECK(*seeds_from_env() == std::vector<std::uint64_t>{4, 5});
  ::setenv("EF_LAB_SEED", "x", 1);
  CHECK_THROWS_AS(seeds_from_env(), Error);
  ::unsetenv("EF_LAB_SEED");
  CHECK_FALSE(seeds_from_env().has_value());
}

TEST_CASE("csv formatting round-trips doubles exactly") {
  for (const double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, 1e-17}) {
    CHECK(std::stod(format_real(v)) == v);
  }
  CHECK(format_optional(std::nullopt).empty());
  TraceRow r;
  r.t = 3;
  r.f_val = 0.5;
  r.bits_cum = 96;
  const std::string csv = trace_csv({r});
  CHECK(csv == std::string(kTraceHeader) + "\n3,0.5,0,0,,,96,\n");
  const auto table = parse_csv(csv);
  CHECK(table.real(0, "f_val") == 0.5);
  CHECK_FALSE(table.optional_real(0, "phi_p").has_value());
  CHECK_THROWS_AS(table.column("nope"), Error);
}

TEST_CASE("svg emitter produces a well-formed document") {
  PlotOptions po;
  po.title = "a < b & c";
  po.log_y = true;
  const std::string svg =
      render_line_plot({{"one", {0, 1, 2}, {1, 0.1, 0.01}}, {"two", {0, 2}, {2, 3}}}, po);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("a &lt; b &amp; c") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("run_experiment writes one trace per seed plus summary and meta") {
  const fs::path dir = scratch("run");
  ExperimentConfig cfg = parse_config("oracle.kind = ce3\noptimizer.rule = sgd\n"
                                      "optimizer.gamma = 0.01\nrun.T = 10\nrun.x0 = ones\n");
  cfg.output_dir = dir / "a";
  const auto out = run_experiment(cfg);
  CHECK(out.summaries.size() == 1);
  CHECK(read_trace_csv(dir / "a" / "trace_seed1.csv").size() == 10);
  CHECK(read_summary_csv(dir / "a" / "summary.csv").size() == 1);
  const std::string meta = slurp(dir / "a" / "meta.txt");
  CHECK(meta.find("0.3.0") != std::string::npos);
  CHECK(meta.find("run.seeds = [1]") != std::string::npos);

  cfg.seeds = {1, 2, 3};
  cfg.write_iterates = true;
  cfg.output_dir = dir / "b";
  run_experiment(cfg, 3);
  for (int s = 1; s <= 3; ++s) {
    CHECK(fs::exists(dir / "b" / ("trace_seed" + std::to_string(s) + ".csv")));
    CHECK(fs::exists(dir / "b" / ("iterates_seed" + std::to_string(s) + ".csv")));
  }
  CHECK(read_summary_csv(dir / "b" / "summary.csv").size() == 3);

  // Thread count does not change the bytes.
  cfg.output_dir = dir / "c";
  run_experiment(cfg, 1);
  for (const char* f : {"trace_seed2.csv", "summary.csv", "iterates_seed3.csv", "meta.txt"}) {
    if (std::string(f) == "meta.txt") continue;
    CHECK(slurp(dir / "b" / f) == slurp(dir / "c" / f));
  }
  fs::remove_all(dir);
}

TEST_CASE("sweep reports the argmin per rule") {
  const fs::path dir = scratch("sweep");
  ExperimentConfig cfg = parse_config(
      "oracle.kind = sparse_noise\noracle.d = 10\noracle.noise_std = 0\nrun.T = 200\n"
      "run.x0 = ones\nsweep.rules = [sgd, sign_sgd, ec_sgd:top_k:2]\n");
  cfg.output_dir = dir;
  const auto rep = sweep_experiment(cfg);
  CHECK(rep.cells.size() == 27);
  REQUIRE(rep.best.size() == 3);
  // Noise-free 1/2|x|^2 contracts by |1 - gamma| per step; gamma = 10 diverges.
  CHECK(rep.best[0].rule == "sgd");
  CHECK(rep.best[0].gamma < 2.0);
  bool any_diverged = false;
  for (const auto& c : rep.cells) any_diverged = any_diverged || c.diverged;
  CHECK(any_diverged);
  CHECK(read_csv(dir / "sweep.csv").rows.size() == 27);

  cfg.grid.points = 1;
  cfg.grid.lo = cfg.grid.hi = 0.1;
  cfg.sweep_rules = {"sgd"};
  const auto single = sweep_experiment(cfg);
  REQUIRE(single.cells.size() == 1);
  ExperimentConfig plain = cfg;
  plain.optimizer = OptimizerSpec::simple(Rule::sgd, 0.1);
  plain.output_dir = dir / "plain";
  const auto out = run_experiment(plain);
  CHECK(single.cells[0].loss == out.summaries[0].final_f);
  fs::remove_all(dir);
}

TEST_CASE("parallel_for rethrows worker failures") {
  CHECK_THROWS_AS(parallel_for(8, 3,
                               [](std::size_t i) {
                                 if (i == 5) fail(ErrorCode::numeric_failure, "boom");
                               }),
                  Error);
}
