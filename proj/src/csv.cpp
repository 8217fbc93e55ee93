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
#include "eflab/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "eflab/error.hpp"

namespace eflab {

namespace {

double parse_real(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorCode::io_error, fmt::format("csv: bad number '{}' in {}", s, what));
  }
  return v;
}

std::uint64_t parse_count(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorCode::io_error, fmt::format("csv: bad integer '{}' in {}", s, what));
  }
  return v;
}

}  // namespace

std::string format_real(double v) { return fmt::format("{}", v); }

std::string format_optional(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::string out(kTraceHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.t, format_real(r.f_val),
                       format_real(r.grad_norm_sq), format_real(r.err_norm_sq),
                       format_optional(r.phi_p), format_optional(r.span_dist), r.bits_cum,
                       format_optional(r.test_loss));
  }
  return out;
}

std::string summary_csv(const std::vector<RunSummary>& rows) {
  std::string out(kSummaryHeader);
  out += '\n';
  for (const auto& s : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", s.seed, format_real(s.f0),
                       format_real(s.final_f), format_real(s.min_f),
                       format_real(s.min_grad_norm_sq), format_optional(s.avg_iterate_loss),
                       format_real(s.final_err_norm_sq), format_optional(s.empirical_delta),
                       format_optional(s.final_test_loss), format_optional(s.best_test_loss),
                       s.bits_total);
  }
  return out;
}

std::string iterates_csv(const std::vector<std::pair<std::uint64_t, Vector>>& iterates) {
  std::string out = "t";
  const Eigen::Index d = iterates.empty() ? 0 : iterates.front().second.size();
  for (Eigen::Index j = 0; j < d; ++j) out += fmt::format(",x_{}", j + 1);
  out += '\n';
  for (const auto& [t, x] : iterates) {
    out += fmt::format("{}", t);
    for (Eigen::Index j = 0; j < x.size(); ++j) out += "," + format_real(x[j]);
    out += '\n';
  }
  return out;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  fail(ErrorCode::io_error, fmt::format("csv: no column '{}'", name));
}

double CsvTable::real(std::size_t row, std::string_view name) const {
  return parse_real(rows.at(row).at(column(name)), name);
}

std::optional<double> CsvTable::optional_real(std::size_t row, std::string_view name) const {
  const auto& cell = rows.at(row).at(column(name));
  if (cell.empty()) return std::nullopt;
  return parse_real(cell, name);
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool first = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != table.header.size()) {
        fail(ErrorCode::io_error, "csv: row width differs from header");
      }
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, fmt::format("cannot open {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  std::vector<TraceRow> rows;
  rows.reserve(t.rows.size());
  const auto ct = t.column("t");
  const auto cb = t.column("bits_cum");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    TraceRow r;
    r.t = parse_count(t.rows[i][ct], "t");
    r.f_val = t.real(i, "f_val");
    r.grad_norm_sq = t.real(i, "grad_norm_sq");
    r.err_norm_sq = t.real(i, "err_norm_sq");
    r.phi_p = t.optional_real(i, "phi_p");
    r.span_dist = t.optional_real(i, "span_dist");
    r.bits_cum = parse_count(t.rows[i][cb], "bits_cum");
    r.test_loss = t.optional_real(i, "test_loss");
    rows.push_back(r);
  }
  return rows;
}

std::vector<RunSummary> read_summary_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  std::vector<RunSummary> out;
  const auto cs = t.column("seed");
  const auto cb = t.column("bits_total");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    RunSummary s;
    s.seed = parse_count(t.rows[i][cs], "seed");
    s.f0 = t.real(i, "f0");
    s.final_f = t.real(i, "final_f");
    s.min_f = t.real(i, "min_f");
    s.min_grad_norm_sq = t.real(i, "min_grad_norm_sq");
    s.avg_iterate_loss = t.optional_real(i, "avg_iterate_loss");
    s.final_err_norm_sq = t.real(i, "final_err_norm_sq");
    s.empirical_delta = t.optional_real(i, "empirical_delta");
    s.final_test_loss = t.optional_real(i, "final_test_loss");
    s.best_test_loss = t.optional_real(i, "best_test_loss");
    s.bits_total = parse_count(t.rows[i][cb], "bits_total");
    out.push_back(s);
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io_error, fmt::format("cannot write {}", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(ErrorCode::io_error, fmt::format("write failed for {}", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace eflab
