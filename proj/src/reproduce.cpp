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
#include "eflab/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "eflab/csv.hpp"
#include "eflab/error.hpp"
#include "eflab/svg.hpp"

namespace eflab {

namespace fs = std::filesystem;

bool Verdict::pass() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string Verdict::render() const {
  std::string out;
  for (const auto& c : checks) {
    out += fmt::format("[{}] {}: {}\n", c.pass ? "PASS" : "FAIL", c.name, c.detail);
  }
  out += fmt::format("{}: {}\n", name, pass() ? "PASS" : "FAIL");
  return out;
}

const std::vector<std::string>& reproduction_names() {
  static const std::vector<std::string> names{"ce1", "ce2", "ce3", "theorem1", "toy_a1",
                                              "fig2_span"};
  return names;
}

namespace {

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> s(count);
  std::iota(s.begin(), s.end(), first);
  return s;
}

ExperimentConfig base_config(OracleKind kind, const fs::path& dir) {
  ExperimentConfig cfg;
  cfg.oracle.kind = kind;
  cfg.output_dir = dir;
  return cfg;
}

InitSpec explicit_x0(std::vector<double> v) {
  InitSpec s;
  s.kind = InitSpec::Kind::values;
  s.values = std::move(v);
  return s;
}

fs::path trace_path(const fs::path& dir, std::uint64_t seed) {
  return dir / fmt::format("trace_seed{}.csv", seed);
}

struct MeanCurve {
  std::vector<double> t;
  std::vector<double> mean;
};

/// Seed mean of f_val over rows shared by every trace; prepends t = 0 from
/// the summary.
MeanCurve mean_curve(const fs::path& dir) {
  const auto summary = read_summary_csv(dir / "summary.csv");
  MeanCurve c;
  std::vector<std::vector<TraceRow>> traces;
  for (const auto& s : summary) traces.push_back(read_trace_csv(trace_path(dir, s.seed)));
  const double S = static_cast<double>(summary.size());
  double f0 = 0.0;
  for (const auto& s : summary) f0 += s.f0 / S;
  c.t.push_back(0.0);
  c.mean.push_back(f0);
  for (std::size_t r = 0; r < traces.front().size(); ++r) {
    double m = 0.0;
    for (const auto& tr : traces) m += tr.at(r).f_val / S;
    c.t.push_back(static_cast<double>(traces.front()[r].t));
    c.mean.push_back(m);
  }
  return c;
}

void maybe_plot(const ReproduceOptions& opts, const fs::path& path, std::string title,
                std::string y_label, std::vector<PlotSeries> series, bool log_y) {
  if (!opts.svg) return;
  PlotOptions po;
  po.title = std::move(title);
  po.x_label = "step";
  po.y_label = std::move(y_label);
  po.log_y = log_y;
  if (log_y) {
    for (auto& s : series) {
      for (auto& y : s.y) y = std::max(y, 1e-16);
    }
  }
  write_file_atomic(path, render_line_plot(series, po));
}

void say(const Reporter& report, const std::string& msg) {
  if (report) report(msg);
}

// ---------------------------------------------------------------------------

Verdict reproduce_ce1(const ReproduceOptions& opts, const Reporter& report) {
  const fs::path root = opts.out_dir / "ce1";
  Verdict v{"ce1", {}};
  auto cfg = base_config(OracleKind::ce1, root / "sign_sgd");
  cfg.optimizer = OptimizerSpec::simple(Rule::sign_sgd, 0.01);
  cfg.optimizer.projection = Box{-1.0, 1.0};
  cfg.T = 10000;
  cfg.seeds = seed_range(1, 100);
  cfg.record.dense_prefix = 200;
  cfg.record.every = 100;
  say(report, "ce1: sign_sgd, 100 seeds");
  run_experiment(cfg, opts.jobs);
  auto sgd = cfg;
  sgd.optimizer.rule = Rule::sgd;
  sgd.output_dir = root / "sgd";
  say(report, "ce1: sgd, 100 seeds");
  run_experiment(sgd, opts.jobs);

  // Per-step increments of f over the first 200 steps, seed by seed.
  const auto summary = read_summary_csv(cfg.output_dir / "summary.csv");
  std::vector<std::vector<TraceRow>> traces;
  for (const auto& s : summary) traces.push_back(read_trace_csv(trace_path(cfg.output_dir, s.seed)));
  const double S = static_cast<double>(summary.size());
  double worst_z = std::numeric_limits<double>::infinity();
  std::uint64_t worst_t = 0;
  bool monotone = true;
  for (std::size_t r = 0; r < 200; ++r) {
    double mean = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < traces.size(); ++i) {
      const double prev = r == 0 ? summary[i].f0 : traces[i][r - 1].f_val;
      const double diff = traces[i][r].f_val - prev;
      mean += diff;
      sq += diff * diff;
    }
    mean /= S;
    const double var = std::max(0.0, (sq / S - mean * mean) * S / (S - 1.0));
    const double se = std::sqrt(var / S);
    if (mean < -3.0 * se) monotone = false;
    const double z = se > 0.0 ? mean / se : (mean >= 0.0 ? 1e300 : -1e300);
    if (z < worst_z) {
      worst_z = z;
      worst_t = traces[0][r].t;
    }
  }
  const MeanCurve sign_curve = mean_curve(cfg.output_dir);
  const double slope = (sign_curve.mean[200] - sign_curve.mean[0]) / 200.0;
  v.checks.push_back({"sign_sgd seed-mean f nondecreasing over t <= 200 (3 SE slack)", monotone,
                      fmt::format("worst increment z = {:.3g} at t = {}; mean slope {:.4g} "
                                  "per step, expected gamma/8 = {:.4g}",
                                  worst_z, worst_t, slope, 0.01 / 8.0)});
  const auto sgd_summary = read_summary_csv(sgd.output_dir / "summary.csv");
  double sgd_final = 0.0;
  for (const auto& s : sgd_summary) sgd_final += s.final_f / static_cast<double>(sgd_summary.size());
  v.checks.push_back({"sgd seed-mean final f < -0.2", sgd_final < -0.2,
                      fmt::format("final seed-mean f = {:.6g}", sgd_final)});
  const MeanCurve sgd_curve = mean_curve(sgd.output_dir);
  maybe_plot(opts, root / "ce1.svg", "ce1: seed-mean f", "f",
             {{"sign_sgd", sign_curve.t, sign_curve.mean}, {"sgd", sgd_curve.t, sgd_curve.mean}},
             false);
  return v;
}

Verdict reproduce_ce2(const ReproduceOptions& opts, const Reporter& report) {
  const fs::path root = opts.out_dir / "ce2";
  Verdict v{"ce2", {}};
  const auto grid = LrGrid{}.values();
  std::vector<PlotSeries> series;
  bool all_on_line = true;
  bool all_above = true;
  std::string worst;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    auto cfg = base_config(OracleKind::ce2, root / fmt::format("sign_sgd_gamma{}", k));
    cfg.oracle.epsilon = 0.5;
    cfg.optimizer = OptimizerSpec::simple(Rule::sign_sgd, grid[k]);
    cfg.T = 10000;
    cfg.x0 = explicit_x0({1.0, 1.0});
    cfg.write_iterates = true;
    run_experiment(cfg, opts.jobs);

    const auto summary = read_summary_csv(cfg.output_dir / "summary.csv");
    const auto rows = read_trace_csv(trace_path(cfg.output_dir, 1));
    const CsvTable it = read_csv(cfg.output_dir / "iterates_seed1.csv");
    const double f0 = summary.at(0).f0;
    double min_f = f0;
    for (const auto& r : rows) min_f = std::min(min_f, r.f_val);
    std::size_t off_line = 0;
    for (std::size_t r = 0; r < it.rows.size(); ++r) {
      if (it.real(r, "x_1") + it.real(r, "x_2") != 2.0) ++off_line;
    }
    all_on_line = all_on_line && off_line == 0;
    all_above = all_above && min_f >= f0;
    worst += fmt::format(" g={:.3g}: min f={:.17g}, off-line={};", grid[k], min_f, off_line);
    MeanCurve c = mean_curve(cfg.output_dir);
    series.push_back({fmt::format("sign_sgd {:.2g}", grid[k]), c.t, c.mean});
  }
  say(report, "ce2: sign_sgd grid done");
  v.checks.push_back({"sign_sgd x1 + x2 == 2 exactly, every grid gamma", all_on_line, worst});
  v.checks.push_back({"sign_sgd f(x_t) >= f(x0) = 1, every grid gamma", all_above,
                      "see per-gamma minima above"});

  auto ef = base_config(OracleKind::ce2, root / "ef_signsgd");
  ef.oracle.epsilon = 0.5;
  ef.optimizer = OptimizerSpec::ec_sgd(CompressorSpec::sign_scaled(), 0.1);
  ef.T = 10000;
  ef.x0 = explicit_x0({1.0, 1.0});
  ef.write_iterates = true;
  run_experiment(ef, opts.jobs);
  const auto ef_summary = read_summary_csv(ef.output_dir / "summary.csv");
  const auto ef_rows = read_trace_csv(trace_path(ef.output_dir, 1));
  double ef_min = ef_summary.at(0).f0;
  std::uint64_t ef_first = 0;
  for (const auto& r : ef_rows) {
    if (r.f_val < ef_min) ef_min = r.f_val;
    if (ef_first == 0 && r.f_val < 0.01 * ef_summary.at(0).f0) ef_first = r.t;
  }
  v.checks.push_back(
      {"ef_signsgd (gamma = 0.1) reaches f < 0.01 f(x0)", ef_first != 0,
       ef_first != 0 ? fmt::format("first at t = {}, min f = {:.6g}", ef_first, ef_min)
                     : fmt::format("min f over 1e4 steps = {:.6g}, final f = {:.6g}", ef_min,
                                   ef_rows.back().f_val)});
  MeanCurve c = mean_curve(ef.output_dir);
  series.push_back({"ef_signsgd 0.1", c.t, c.mean});
  maybe_plot(opts, root / "ce2.svg", "ce2: f(x_t)", "f", std::move(series), true);
  return v;
}

Verdict reproduce_ce3(const ReproduceOptions& opts, const Reporter& report) {
  const fs::path root = opts.out_dir / "ce3";
  Verdict v{"ce3", {}};
  const auto grid = LrGrid{}.values();
  std::vector<PlotSeries> series;
  bool trapped = true;
  std::string detail;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    auto cfg = base_config(OracleKind::ce3, root / fmt::format("sign_sgd_gamma{}", k));
    cfg.optimizer = OptimizerSpec::simple(Rule::sign_sgd, grid[k]);
    cfg.T = 10000;
    cfg.seeds = {1, 2, 3};
    cfg.x0 = explicit_x0({1.0, 1.0});
    run_experiment(cfg, opts.jobs);
    const auto summary = read_summary_csv(cfg.output_dir / "summary.csv");
    double min_f = std::numeric_limits<double>::infinity();
    double f0 = summary.at(0).f0;
    for (const auto& s : summary) {
      for (const auto& r : read_trace_csv(trace_path(cfg.output_dir, s.seed))) {
        min_f = std::min(min_f, r.f_val);
      }
      f0 = std::min(f0, s.f0);
    }
    trapped = trapped && min_f >= f0;
    detail += fmt::format(" g={:.3g}: min f={:.6g};", grid[k], min_f);
    MeanCurve c = mean_curve(cfg.output_dir);
    series.push_back({fmt::format("sign_sgd {:.2g}", grid[k]), c.t, c.mean});
  }
  say(report, "ce3: sign_sgd grid done");
  v.checks.push_back({"sign_sgd f(x_t) >= f(x0) = 2, every grid gamma, 3 seeds", trapped, detail});

  auto ec = base_config(OracleKind::ce3, root / "ec_sign_scaled");
  ec.T = 10000;
  ec.optimizer = OptimizerSpec::ec_sgd(CompressorSpec::sign_scaled(),
                                       1.0 / std::sqrt(static_cast<double>(ec.T + 1)));
  ec.seeds = seed_range(1, 20);
  ec.x0 = explicit_x0({1.0, 1.0});
  ec.record.every = 10;
  run_experiment(ec, opts.jobs);
  const auto summary = read_summary_csv(ec.output_dir / "summary.csv");
  double mean_final = 0.0;
  for (const auto& s : summary) mean_final += s.final_f / static_cast<double>(summary.size());
  v.checks.push_back({"ec_sgd(sign_scaled), gamma = 1/sqrt(T+1): seed-mean final f < 0.02",
                      mean_final < 0.02, fmt::format("seed-mean final f = {:.6g}", mean_final)});
  MeanCurve c = mean_curve(ec.output_dir);
  series.push_back({"ec_sgd sign_scaled", c.t, c.mean});
  maybe_plot(opts, root / "ce3.svg", "ce3: seed-mean f", "f", std::move(series), true);
  return v;
}

Verdict reproduce_theorem1(const ReproduceOptions& opts, const Reporter& report) {
  const fs::path root = opts.out_dir / "theorem1";
  fs::create_directories(root);
  Verdict v{"theorem1", {}};
  const auto grid = LrGrid{}.values();
  constexpr std::size_t kInstances = 20;
  constexpr std::size_t kDims[] = {2, 5, 20};
  constexpr std::size_t T = 10000;

  struct Instance {
    std::unique_ptr<Oracle> oracle;
    Vector x0;
    bool signs_ok = false;
    double dist_line = 0.0;
  };
  std::vector<Instance> inst(kInstances);
  for (std::size_t k = 0; k < kInstances; ++k) {
    OracleParams p;
    p.kind = OracleKind::theorem1;
    p.d = kDims[k % 3];
    p.n = 0;
    inst[k].oracle = build_oracle(p, k + 1);
    const auto& th = dynamic_cast<const Theorem1Oracle&>(*inst[k].oracle);
    InitSpec init;
    init.kind = InitSpec::Kind::gaussian;
    inst[k].x0 = make_x0(init, p.d, k + 1);
    inst[k].signs_ok = th.sign_pattern_holds();
    const Vector& s = th.sign_pattern();
    const Vector r = *th.meta().x_star - inst[k].x0;
    inst[k].dist_line = (r - (r.dot(s) / s.squaredNorm()) * s).norm();
  }

  std::vector<double> min_dist(kInstances * grid.size());
  RecordingOptions rec;
  rec.every = T;
  parallel_for(min_dist.size(), opts.jobs, [&](std::size_t i) {
    const std::size_t k = i / grid.size();
    const auto spec = OptimizerSpec::simple(Rule::sign_sgd, grid[i % grid.size()]);
    const Vector& xs = *inst[k].oracle->meta().x_star;
    double best = (inst[k].x0 - xs).norm();
    run(spec, *inst[k].oracle, inst[k].x0, T, k + 1, rec, [&](const StepEvent& ev) {
      best = std::min(best, (ev.state.x - xs).norm());
    });
    min_dist[i] = best;
  });
  say(report, "theorem1: 20 instances x 9 step sizes done");

  std::string csv = "instance,d,n,gamma,sign_pattern_ok,dist_line,min_dist_opt\n";
  for (std::size_t i = 0; i < min_dist.size(); ++i) {
    const std::size_t k = i / grid.size();
    const auto& o = *inst[k].oracle;
    csv += fmt::format("{},{},{},{},{},{},{}\n", k + 1, o.dim(),
                       dynamic_cast<const LeastSquaresOracle&>(o).data().rows(),
                       format_real(grid[i % grid.size()]), inst[k].signs_ok ? 1 : 0,
                       format_real(inst[k].dist_line), format_real(min_dist[i]));
  }
  write_file_atomic(root / "runs.csv", csv);

  const CsvTable table = read_csv(root / "runs.csv");
  bool signs = true;
  bool far = true;
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    signs = signs && table.real(r, "sign_pattern_ok") == 1.0;
    const double ratio = table.real(r, "min_dist_opt") / table.real(r, "dist_line");
    worst_ratio = std::min(worst_ratio, ratio);
    far = far && table.real(r, "min_dist_opt") >= 0.5 * table.real(r, "dist_line");
  }
  v.checks.push_back({"sgn(a_i) = +/- s exactly, all instances", signs,
                      fmt::format("{} instances, d in {{2, 5, 20}}", kInstances)});
  v.checks.push_back({"min_t |x_t - x*| >= 0.5 dist(x*, x0 + span{s}), every gamma", far,
                      fmt::format("smallest ratio min_dist / dist_line = {:.6g}", worst_ratio)});
  return v;
}

Verdict reproduce_toy_a1(const ReproduceOptions& opts, const Reporter& report) {
  const fs::path root = opts.out_dir / "toy_a1";
  Verdict v{"toy_a1", {}};
  const std::uint64_t at = opts.toy_a1_iteration;
  if (at < 1) fail(ErrorCode::invalid_argument, "toy_a1: comparison iteration must be >= 1");
  struct Arm {
    std::string name;
    OptimizerSpec spec;
  };
  const std::vector<Arm> arms{
      {"sgd", OptimizerSpec::simple(Rule::sgd, 0.001)},
      {"ef_signsgd", OptimizerSpec::ec_sgd(CompressorSpec::sign_scaled(), 0.001)},
      {"sign_sgd", OptimizerSpec::simple(Rule::sign_sgd, 0.01)},
  };
  std::vector<PlotSeries> series;
  std::vector<double> f_at;
  for (const auto& arm : arms) {
    auto cfg = base_config(OracleKind::sparse_noise, root / arm.name);
    cfg.oracle.d = 100;
    cfg.oracle.noise_std = 100.0;
    cfg.optimizer = arm.spec;
    cfg.T = std::max<std::uint64_t>(at, 500);
    cfg.seeds = seed_range(1, 100);
    cfg.x0.kind = InitSpec::Kind::ones;
    cfg.record.phi = false;
    run_experiment(cfg, opts.jobs);
    say(report, fmt::format("toy_a1: {} done", arm.name));
    const MeanCurve c = mean_curve(cfg.output_dir);
    const auto pos = std::find(c.t.begin(), c.t.end(), static_cast<double>(at));
    if (pos == c.t.end()) fail(ErrorCode::io_error, "toy_a1: comparison step missing from trace");
    f_at.push_back(c.mean[static_cast<std::size_t>(pos - c.t.begin())]);
    series.push_back({arm.name, c.t, c.mean});
  }
  const double sgd = f_at[0], ef = f_at[1], sign = f_at[2];
  v.checks.push_back({fmt::format("seed-mean f at t = {}: sign_sgd < sgd", at), sign < sgd,
                      fmt::format("sign_sgd {:.6g}, sgd {:.6g}", sign, sgd)});
  v.checks.push_back({fmt::format("|f_sgd - f_ef| <= 0.25 f_sgd at t = {}", at),
                      std::abs(sgd - ef) <= 0.25 * sgd,
                      fmt::format("sgd {:.6g}, ef_signsgd {:.6g}, relative gap {:.4g}", sgd, ef,
                                  std::abs(sgd - ef) / sgd)});
  maybe_plot(opts, root / "toy_a1.svg", "toy_a1: seed-mean f - f*", "f", std::move(series), true);
  return v;
}

Verdict reproduce_fig2(const ReproduceOptions& opts, const Reporter& report) {
  const fs::path root = opts.out_dir / "fig2_span";
  Verdict v{"fig2_span", {}};
  constexpr std::size_t T = 4500;
  struct Arm {
    std::string name;
    OptimizerSpec spec;
    std::vector<std::uint64_t> decimate_at;
  };
  auto zero_sign = [](OptimizerSpec s) {
    s.sign_zero = SignZero::zero;
    s.compressor.sign_zero = SignZero::zero;
    return s;
  };
  auto ef_spec = OptimizerSpec::ec_sgd(CompressorSpec::sign_scaled(), 0.1);
  const std::vector<Arm> arms{
      {"sgd", zero_sign(OptimizerSpec::simple(Rule::sgd, 0.1)), {}},
      {"sign_sgd", zero_sign(OptimizerSpec::simple(Rule::sign_sgd, 1e-2)), {1500, 3000}},
      {"signum", zero_sign(OptimizerSpec::simple(Rule::signum, 1e-3, 0.9)), {1500, 3000}},
      {"ef_signsgd", zero_sign(ef_spec), {}},
  };
  std::vector<PlotSeries> train, test, span;
  for (const auto& arm : arms) {
    auto cfg = base_config(OracleKind::wilson, root / arm.name);
    cfg.oracle.n = 200;
    cfg.data_seed = kFig2DataSeed;
    cfg.optimizer = arm.spec;
    cfg.T = T;
    cfg.record.full_batch = true;
    cfg.record.span = true;
    cfg.record.test_loss = true;
    cfg.record.every = 10;
    cfg.record.dense_prefix = 100;
    cfg.record.decimate_at = arm.decimate_at;
    run_experiment(cfg, 1);
    say(report, fmt::format("fig2_span: {} done", arm.name));
    PlotSeries tr{arm.name, {}, {}}, te{arm.name, {}, {}}, sp{arm.name, {}, {}};
    for (const auto& r : read_trace_csv(trace_path(cfg.output_dir, 1))) {
      const double t = static_cast<double>(r.t);
      tr.x.push_back(t);
      tr.y.push_back(r.f_val);
      if (r.test_loss) {
        te.x.push_back(t);
        te.y.push_back(*r.test_loss);
      }
      if (r.span_dist) {
        sp.x.push_back(t);
        sp.y.push_back(*r.span_dist);
      }
    }
    train.push_back(std::move(tr));
    test.push_back(std::move(te));
    span.push_back(std::move(sp));
  }

  auto final_row = [&](const std::string& name) {
    return read_trace_csv(trace_path(root / name, 1)).back();
  };
  auto summary = [&](const std::string& name) {
    return read_summary_csv(root / name / "summary.csv").at(0);
  };

  const TraceRow ef = final_row("ef_signsgd");
  const double ef_span = ef.span_dist.value_or(std::numeric_limits<double>::quiet_NaN());
  const double ef_test = ef.test_loss.value_or(std::numeric_limits<double>::quiet_NaN());
  v.checks.push_back({"ef_signsgd final train loss < 1e-3", ef.f_val < 1e-3,
                      fmt::format("{:.4g}", ef.f_val)});
  v.checks.push_back({"ef_signsgd final span distance < 1e-3", ef_span < 1e-3,
                      fmt::format("{:.4g}", ef_span)});
  v.checks.push_back({"ef_signsgd final test loss < 0.01", ef_test < 0.01,
                      fmt::format("{:.4g}", ef_test)});
  for (const std::string name : {"sign_sgd", "signum"}) {
    const TraceRow last = final_row(name);
    const RunSummary s = summary(name);
    const double best = s.best_test_loss.value_or(std::numeric_limits<double>::quiet_NaN());
    const double sd = last.span_dist.value_or(std::numeric_limits<double>::quiet_NaN());
    v.checks.push_back({name + " best test loss > 0.8", best > 0.8, fmt::format("{:.4g}", best)});
    v.checks.push_back({name + " final train loss < 1e-3", last.f_val < 1e-3,
                        fmt::format("{:.4g}", last.f_val)});
    v.checks.push_back({name + " final span distance bounded away from 0 (> 0.1)", sd > 0.1,
                        fmt::format("{:.4g}", sd)});
  }
  maybe_plot(opts, root / "train_loss.svg", "wilson: train loss", "train loss", train, true);
  maybe_plot(opts, root / "test_loss.svg", "wilson: test loss", "test loss", test, true);
  maybe_plot(opts, root / "span_distance.svg", "wilson: distance to gradient span",
             "distance", span, true);
  return v;
}

}  // namespace

Verdict reproduce(std::string_view name, const ReproduceOptions& opts, const Reporter& report) {
  if (name == "ce1") return reproduce_ce1(opts, report);
  if (name == "ce2") return reproduce_ce2(opts, report);
  if (name == "ce3") return reproduce_ce3(opts, report);
  if (name == "theorem1") return reproduce_theorem1(opts, report);
  if (name == "toy_a1") return reproduce_toy_a1(opts, report);
  if (name == "fig2_span") return reproduce_fig2(opts, report);
  fail(ErrorCode::invalid_argument,
       fmt::format("unknown reproduction '{}' (expected ce1, ce2, ce3, theorem1, toy_a1, "
                   "fig2_span)",
                   name));
}

}  // namespace eflab
