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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eflab/analysis.hpp"
#include "eflab/trace.hpp"

namespace eflab {

inline constexpr std::string_view kTraceHeader =
    "t,f_val,grad_norm_sq,err_norm_sq,phi_p,span_dist,bits_cum,test_loss";
inline constexpr std::string_view kSummaryHeader =
    "seed,f0,final_f,min_f,min_grad_norm_sq,avg_iterate_loss,final_err_norm_sq,"
    "empirical_delta,final_test_loss,best_test_loss,bits_total";

/// Shortest round-trip decimal form; identical bytes for identical doubles.
std::string format_real(double v);
std::string format_optional(const std::optional<double>& v);

std::string trace_csv(const std::vector<TraceRow>& rows);
std::string summary_csv(const std::vector<RunSummary>& rows);

/// Header t,x_1,...,x_d.
std::string iterates_csv(const std::vector<std::pair<std::uint64_t, Vector>>& iterates);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
  double real(std::size_t row, std::string_view name) const;
  std::optional<double> optional_real(std::size_t row, std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);
std::vector<RunSummary> read_summary_csv(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace eflab
