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
#include "eflab/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "eflab/csv.hpp"
#include "eflab/error.hpp"

namespace eflab {

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const std::size_t workers = std::min<std::size_t>(std::max(1U, jobs), count);
  std::vector<std::exception_ptr> errors(count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

bool should_record(const RecordingOptions& r, std::uint64_t t, std::uint64_t T) {
  return t <= r.dense_prefix || t % r.every == 0 || t == T;
}

std::string meta_text(const ExperimentConfig& cfg) {
  std::string out = fmt::format("# ef-lab {}\n", EFLAB_VERSION);
  out += render_config(cfg);
  return out;
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& cfg, unsigned jobs, const Reporter& report) {
  cfg.validate();
  const auto oracle = build_oracle(cfg.oracle, cfg.data_seed);
  const std::size_t d = oracle->dim();
  cfg.optimizer.validate(d);
  std::filesystem::create_directories(cfg.output_dir);

  std::vector<RunSummary> summaries(cfg.seeds.size());
  std::mutex report_mu;
  parallel_for(cfg.seeds.size(), jobs, [&](std::size_t i) {
    const std::uint64_t seed = cfg.seeds[i];
    const Vector x0 = make_x0(cfg.x0, d, seed);
    std::vector<std::pair<std::uint64_t, Vector>> iterates;
    StepObserver observer;
    if (cfg.write_iterates) {
      iterates.emplace_back(0, x0);
      observer = [&](const StepEvent& ev) {
        if (should_record(cfg.record, ev.t, cfg.T)) iterates.emplace_back(ev.t, ev.state.x);
      };
    }
    const Trace trace = run(cfg.optimizer, *oracle, x0, cfg.T, seed, cfg.record, observer);
    summaries[i] = summarize(trace, *oracle);
    write_file_atomic(cfg.output_dir / fmt::format("trace_seed{}.csv", seed),
                      trace_csv(trace.rows));
    if (cfg.write_iterates) {
      write_file_atomic(cfg.output_dir / fmt::format("iterates_seed{}.csv", seed),
                        iterates_csv(iterates));
    }
    if (report) {
      std::lock_guard lock(report_mu);
      report(fmt::format("seed {}: final f = {}", seed, format_real(summaries[i].final_f)));
    }
  });
  write_file_atomic(cfg.output_dir / "summary.csv", summary_csv(summaries));
  write_file_atomic(cfg.output_dir / "meta.txt", meta_text(cfg));
  return {std::move(summaries), cfg.output_dir};
}

OptimizerSpec parse_sweep_rule(std::string_view text, const OptimizerSpec& base) {
  OptimizerSpec spec = base;
  const auto colon = text.find(':');
  spec.rule = parse_rule(text.substr(0, colon));
  if (spec.rule == Rule::ec_sgd) {
    if (colon == std::string_view::npos) {
      fail(ErrorCode::config_error,
           fmt::format("sweep.rules: '{}' needs a compressor, e.g. ec_sgd:sign_scaled", text));
    }
    spec.compressor = CompressorSpec::parse(text.substr(colon + 1));
    spec.compressor.sign_zero = base.compressor.sign_zero;
  } else if (colon != std::string_view::npos) {
    fail(ErrorCode::config_error,
         fmt::format("sweep.rules: only ec_sgd takes a compressor, got '{}'", text));
  }
  return spec;
}

SweepReport sweep_experiment(const ExperimentConfig& cfg, unsigned jobs, const Reporter& report) {
  cfg.validate();
  const auto oracle = build_oracle(cfg.oracle, cfg.data_seed);
  const std::size_t d = oracle->dim();
  std::vector<std::string> rules = cfg.sweep_rules;
  if (rules.empty()) {
    rules.emplace_back(to_string(cfg.optimizer.rule));
    if (cfg.optimizer.rule == Rule::ec_sgd) rules.back() += ":" + cfg.optimizer.compressor.to_string();
  }
  const auto grid = cfg.grid.values();
  const bool use_test = oracle->kind() == OracleKind::wilson;

  struct Job {
    std::size_t rule;
    std::size_t gamma;
    std::size_t seed;
  };
  std::vector<Job> work;
  std::vector<OptimizerSpec> specs;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    specs.push_back(parse_sweep_rule(rules[r], cfg.optimizer));
    specs.back().validate(d);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      for (std::size_t s = 0; s < cfg.seeds.size(); ++s) work.push_back({r, g, s});
    }
  }
  RecordingOptions rec = cfg.record;
  rec.span = false;
  rec.every = std::max<std::size_t>(cfg.T, 1);
  rec.dense_prefix = 0;
  std::vector<double> loss(work.size());
  std::vector<char> diverged(work.size(), 0);
  parallel_for(work.size(), jobs, [&](std::size_t i) {
    const Job& j = work[i];
    OptimizerSpec spec = specs[j.rule];
    spec.gamma = grid[j.gamma];
    const std::uint64_t seed = cfg.seeds[j.seed];
    try {
      const Trace tr = run(spec, *oracle, make_x0(cfg.x0, d, seed), cfg.T, seed, rec);
      const TraceRow& last = tr.rows.back();
      loss[i] = use_test && last.test_loss ? *last.test_loss : last.f_val;
      if (!std::isfinite(loss[i])) diverged[i] = 1;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::numeric_failure) throw;
      diverged[i] = 1;
    }
  });

  SweepReport out;
  const std::size_t S = cfg.seeds.size();
  for (std::size_t r = 0; r < rules.size(); ++r) {
    std::optional<SweepCell> best;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      SweepCell cell{rules[r], grid[g], 0.0, false};
      for (std::size_t s = 0; s < S; ++s) {
        const std::size_t i = (r * grid.size() + g) * S + s;
        cell.diverged = cell.diverged || diverged[i] != 0;
        cell.loss += loss[i] / static_cast<double>(S);
      }
      if (cell.diverged) cell.loss = std::numeric_limits<double>::infinity();
      if (!cell.diverged && (!best || cell.loss < best->loss)) best = cell;
      out.cells.push_back(cell);
    }
    if (best) {
      out.best.push_back(*best);
      if (report) {
        report(fmt::format("{}: best gamma = {} (loss {})", rules[r], format_real(best->gamma),
                           format_real(best->loss)));
      }
    } else if (report) {
      report(fmt::format("{}: diverged for every gamma", rules[r]));
    }
  }

  std::filesystem::create_directories(cfg.output_dir);
  auto table = [](const std::vector<SweepCell>& cells) {
    std::string s = "rule,gamma,loss,diverged\n";
    for (const auto& c : cells) {
      s += fmt::format("{},{},{},{}\n", c.rule, format_real(c.gamma),
                       c.diverged ? std::string("inf") : format_real(c.loss), c.diverged ? 1 : 0);
    }
    return s;
  };
  write_file_atomic(cfg.output_dir / "sweep.csv", table(out.cells));
  write_file_atomic(cfg.output_dir / "best.csv", table(out.best));
  write_file_atomic(cfg.output_dir / "meta.txt", meta_text(cfg));
  return out;
}

void export_wilson(std::size_t n, std::uint64_t data_seed, const std::filesystem::path& path) {
  Rng rng = make_stream(data_seed, Stream::oracle_data);
  const WilsonData data = generate_wilson(n, rng);
  std::vector<char> is_test(n, 0);
  for (auto r : data.test_rows) is_test[r] = 1;
  std::string s = "row,split,y";
  for (Eigen::Index j = 0; j < data.a.cols(); ++j) s += fmt::format(",a_{}", j + 1);
  s += '\n';
  for (Eigen::Index i = 0; i < data.a.rows(); ++i) {
    const auto r = static_cast<std::size_t>(i);
    s += fmt::format("{},{},{}", r + 1, is_test[r] ? "test" : "train", format_real(data.y[i]));
    for (Eigen::Index j = 0; j < data.a.cols(); ++j) {
      s += ',';
      s += format_real(data.a(i, j));
    }
    s += '\n';
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  write_file_atomic(path, s);
}

}  // namespace eflab
