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
#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "eflab/eflab.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

void print_line(const char* line, void*) {
  std::fputs(line, stdout);
  const std::size_t n = std::char_traits<char>::length(line);
  if (n == 0 || line[n - 1] != '\n') std::fputc('\n', stdout);
  std::fflush(stdout);
}

int report_status(eflab_status s) {
  if (s == EFLAB_OK) return kExitPass;
  std::fprintf(stderr, "ef-lab: error: %s\n", eflab_last_error());
  if (s == EFLAB_E_CONFIG || s == EFLAB_E_INVALID_ARGUMENT) return kExitUsage;
  return kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ef-lab: error-feedback compressed SGD laboratory"};
  app.set_version_flag("--version", std::string(eflab_version()));
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  unsigned jobs = 1;

  auto* run = app.add_subcommand("run", "Run every seed of a config file");
  run->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Override output.dir");
  run->add_option("--jobs", jobs, "Concurrent seeds")->check(CLI::Range(1U, 1024U));

  auto* sweep = app.add_subcommand("sweep", "Log-spaced step-size sweep");
  sweep->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out_dir, "Override output.dir");
  sweep->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::Range(1U, 1024U));

  std::string name;
  bool svg = false;
  std::uint64_t toy_iteration = 0;
  auto* repro = app.add_subcommand("reproduce", "Run a named reproduction and report a verdict");
  repro->add_option("name", name, "ce1, ce2, ce3, theorem1, toy_a1 or fig2_span")
      ->required()
      ->check(CLI::IsMember({"ce1", "ce2", "ce3", "theorem1", "toy_a1", "fig2_span"}));
  repro->add_option("--out", out_dir, "Output directory (default ef-lab-repro)");
  repro->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::Range(1U, 1024U));
  repro->add_flag("--svg", svg, "Also write SVG line plots");
  repro->add_option("--toy-iteration", toy_iteration,
                    "Comparison step for toy_a1 (default 500)");

  std::uint64_t seed = 2019;
  auto* selftest = app.add_subcommand("selftest", "Run the invariant suite");
  selftest->add_option("--seed", seed, "Seed for the randomized checks");

  std::size_t n = 200;
  std::string path;
  auto* export_data = app.add_subcommand("export-data", "Write the wilson data set as CSV");
  export_data->add_option("path", path, "Output CSV")->required();
  export_data->add_option("--n", n, "Number of rows (even)");
  export_data->add_option("--seed", seed, "Data seed")->default_val(0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  const char* out = out_dir.empty() ? nullptr : out_dir.c_str();
  if (*run) return report_status(eflab_run_config(config.c_str(), out, jobs, print_line, nullptr));
  if (*sweep) {
    return report_status(eflab_sweep_config(config.c_str(), out, jobs, print_line, nullptr));
  }
  if (*repro) {
    int passed = 0;
    const eflab_status s = eflab_reproduce(name.c_str(), out, jobs, svg ? 1 : 0, toy_iteration,
                                           &passed, print_line, nullptr);
    if (s != EFLAB_OK) return report_status(s);
    return passed ? kExitPass : kExitFail;
  }
  if (*selftest) {
    int passed = 0;
    const eflab_status s = eflab_selftest(seed, &passed, print_line, nullptr);
    if (s != EFLAB_OK) return report_status(s);
    std::printf("selftest: %s\n", passed ? "PASS" : "FAIL");
    return passed ? kExitPass : kExitFail;
  }
  if (*export_data) return report_status(eflab_export_data(n, seed, path.c_str()));
  return kExitUsage;
}
