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
#include "eflab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "eflab/error.hpp"
#include "eflab/rng.hpp"

namespace eflab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

struct Value {
  std::string text;               // scalar form
  std::vector<std::string> list;  // list form (scalar -> one element)
  int line = 0;
};

class Parser {
 public:
  Parser(std::string_view source) : source_(source) {}

  [[noreturn]] void error(int line, std::string_view key, std::string_view msg) const {
    if (line > 0) {
      fail(ErrorCode::config_error, fmt::format("{}:{}: {}: {}", source_, line, key, msg));
    }
    fail(ErrorCode::config_error, fmt::format("{}: {}: {}", source_, key, msg));
  }

  std::string_view source_;
};

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    std::string_view item = trim(s.substr(start, comma - start));
    if (item.size() >= 2 && item.front() == '"' && item.back() == '"') {
      item = item.substr(1, item.size() - 2);
    }
    if (!item.empty()) out.emplace_back(item);
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(const Parser& p, const std::string& key, const Value& v) {
  T out{};
  const char* b = v.text.data();
  const char* e = b + v.text.size();
  const auto [ptr, ec] = std::from_chars(b, e, out);
  if (ec != std::errc() || ptr != e) {
    p.error(v.line, key, fmt::format("'{}' is not a valid number", v.text));
  }
  return out;
}

bool parse_bool(const Parser& p, const std::string& key, const Value& v) {
  if (v.text == "true" || v.text == "on" || v.text == "1") return true;
  if (v.text == "false" || v.text == "off" || v.text == "0") return false;
  p.error(v.line, key, fmt::format("'{}' is not a boolean", v.text));
}

std::vector<std::uint64_t> parse_seed_list(const Parser& p, const std::string& key,
                                           const Value& v) {
  std::vector<std::uint64_t> seeds;
  for (const auto& item : v.list) {
    Value one{item, {item}, v.line};
    seeds.push_back(parse_number<std::uint64_t>(p, key, one));
  }
  return seeds;
}

template <typename Fn>
void wrap(const Parser& p, const std::string& key, const Value& v, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config_error) throw;
    p.error(v.line, key, e.what());
  }
}

}  // namespace

std::vector<double> LrGrid::values() const {
  std::vector<double> out;
  if (points == 1) {
    out.push_back(lo);
    return out;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < points; ++i) {
    out.push_back(std::pow(10.0, a + (b - a) * static_cast<double>(i) /
                                         static_cast<double>(points - 1)));
  }
  return out;
}

void ExperimentConfig::validate() const {
  auto bad = [](std::string_view field, const std::string& msg) {
    fail(ErrorCode::config_error, fmt::format("{}: {}", field, msg));
  };
  if (!(optimizer.gamma > 0.0) || !std::isfinite(optimizer.gamma)) {
    bad("optimizer.gamma", fmt::format("must be > 0, got {}", optimizer.gamma));
  }
  if (!(optimizer.beta >= 0.0 && optimizer.beta < 1.0)) {
    bad("optimizer.beta", fmt::format("must lie in [0, 1), got {}", optimizer.beta));
  }
  if (T < 1) bad("run.T", "must be >= 1");
  if (seeds.empty()) bad("run.seeds", "must not be empty");
  {
    std::set<std::uint64_t> uniq(seeds.begin(), seeds.end());
    if (uniq.size() != seeds.size()) bad("run.seeds", "must be distinct");
  }
  if (record.every < 1) bad("record.every", "must be >= 1");
  if (record.span && T > RecordingOptions::kMaxSpanSteps) {
    bad("record.span", fmt::format("span recording needs run.T <= {}",
                                   RecordingOptions::kMaxSpanSteps));
  }
  if (!(record.decimate_factor > 0.0)) bad("run.decimate_factor", "must be > 0");
  if (!(grid.lo > 0.0) || !(grid.hi >= grid.lo)) bad("sweep.lo", "need 0 < lo <= hi");
  if (grid.points < 1) bad("sweep.points", "must be >= 1");
  if ((oracle.kind == OracleKind::ce2 || oracle.kind == OracleKind::ce3) &&
      !(oracle.epsilon > 0.0 && oracle.epsilon < 1.0)) {
    bad("oracle.epsilon", "must lie in (0, 1)");
  }
  if (oracle.kind == OracleKind::wilson && (oracle.n < 2 || oracle.n % 2 != 0)) {
    bad("oracle.n", "wilson needs an even n >= 2");
  }
  if (optimizer.rule == Rule::ec_sgd && optimizer.compressor.uses_k() &&
      optimizer.compressor.k < 1) {
    bad("optimizer.compressor", "k must be >= 1");
  }
  if (x0.kind == InitSpec::Kind::values && x0.values.empty()) bad("run.x0", "empty vector");
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  Parser p(source);
  std::map<std::string, Value> kv;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    // Strip a comment that is not inside quotes.
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_quotes = !in_quotes;
      if (line[i] == '#' && !in_quotes) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      p.error(line_no, trim(line), "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    std::string_view raw = trim(line.substr(eq + 1));
    if (key.empty()) p.error(line_no, "<empty>", "missing key");
    if (std::count(key.begin(), key.end(), '.') != 1) {
      p.error(line_no, key, "keys take the form namespace.name");
    }
    Value v;
    v.line = line_no;
    if (raw.empty()) p.error(line_no, key, "missing value");
    if (raw.front() == '[') {
      if (raw.back() != ']') p.error(line_no, key, "unterminated list");
      v.list = split_list(raw.substr(1, raw.size() - 2));
      v.text = std::string(raw);
    } else if (raw.front() == '"') {
      if (raw.size() < 2 || raw.back() != '"') p.error(line_no, key, "unterminated string");
      v.text = std::string(raw.substr(1, raw.size() - 2));
      v.list = split_list(v.text);
    } else {
      v.text = std::string(raw);
      v.list = split_list(v.text);
    }
    if (kv.count(key)) p.error(line_no, key, "duplicate key");
    kv.emplace(key, std::move(v));
  }

  ExperimentConfig cfg;
  for (const auto& [key, v] : kv) {
    wrap(p, key, v, [&, &key = key, &v = v] {
      if (key == "oracle.kind") {
        cfg.oracle.kind = parse_oracle_kind(v.text);
      } else if (key == "oracle.epsilon") {
        cfg.oracle.epsilon = parse_number<double>(p, key, v);
      } else if (key == "oracle.n") {
        cfg.oracle.n = parse_number<std::size_t>(p, key, v);
      } else if (key == "oracle.d") {
        cfg.oracle.d = parse_number<std::size_t>(p, key, v);
      } else if (key == "oracle.noise_std") {
        cfg.oracle.noise_std = parse_number<double>(p, key, v);
      } else if (key == "oracle.region_radius") {
        cfg.oracle.region_radius = parse_number<double>(p, key, v);
      } else if (key == "oracle.sign_pattern") {
        for (const auto& item : v.list) {
          Value one{item, {item}, v.line};
          cfg.oracle.sign_pattern.push_back(parse_number<int>(p, key, one));
        }
      } else if (key == "oracle.data_seed") {
        cfg.data_seed = parse_number<std::uint64_t>(p, key, v);
      } else if (key == "optimizer.rule") {
        cfg.optimizer.rule = parse_rule(v.text);
      } else if (key == "optimizer.compressor") {
        cfg.optimizer.compressor = CompressorSpec::parse(v.text);
      } else if (key == "optimizer.gamma") {
        cfg.optimizer.gamma = parse_number<double>(p, key, v);
      } else if (key == "optimizer.beta") {
        cfg.optimizer.beta = parse_number<double>(p, key, v);
      } else if (key == "optimizer.projection") {
        cfg.optimizer.projection = parse_projection(v.text);
      } else if (key == "optimizer.sign_zero") {
        cfg.optimizer.sign_zero = parse_sign_zero(v.text);
      } else if (key == "run.T") {
        cfg.T = parse_number<std::size_t>(p, key, v);
      } else if (key == "run.seeds") {
        cfg.seeds = parse_seed_list(p, key, v);
      } else if (key == "run.x0") {
        if (v.text == "zeros") {
          cfg.x0.kind = InitSpec::Kind::zeros;
        } else if (v.text == "ones") {
          cfg.x0.kind = InitSpec::Kind::ones;
        } else if (v.text == "gaussian") {
          cfg.x0.kind = InitSpec::Kind::gaussian;
        } else {
          cfg.x0.kind = InitSpec::Kind::values;
          for (const auto& item : v.list) {
            Value one{item, {item}, v.line};
            cfg.x0.values.push_back(parse_number<double>(p, key, one));
          }
        }
      } else if (key == "run.x0_scale") {
        cfg.x0.scale = parse_number<double>(p, key, v);
      } else if (key == "run.full_batch") {
        cfg.record.full_batch = parse_bool(p, key, v);
      } else if (key == "run.decimate_at") {
        cfg.record.decimate_at = parse_seed_list(p, key, v);
      } else if (key == "run.decimate_factor") {
        cfg.record.decimate_factor = parse_number<double>(p, key, v);
      } else if (key == "record.span") {
        cfg.record.span = parse_bool(p, key, v);
      } else if (key == "record.phi") {
        cfg.record.phi = parse_bool(p, key, v);
      } else if (key == "record.test_loss") {
        cfg.record.test_loss = parse_bool(p, key, v);
      } else if (key == "record.every") {
        cfg.record.every = parse_number<std::size_t>(p, key, v);
      } else if (key == "record.dense_prefix") {
        cfg.record.dense_prefix = parse_number<std::size_t>(p, key, v);
      } else if (key == "record.average") {
        cfg.record.average = parse_bool(p, key, v);
      } else if (key == "record.iterates") {
        cfg.write_iterates = parse_bool(p, key, v);
      } else if (key == "output.dir") {
        cfg.output_dir = v.text;
      } else if (key == "sweep.lo") {
        cfg.grid.lo = parse_number<double>(p, key, v);
      } else if (key == "sweep.hi") {
        cfg.grid.hi = parse_number<double>(p, key, v);
      } else if (key == "sweep.points") {
        cfg.grid.points = parse_number<std::size_t>(p, key, v);
      } else if (key == "sweep.rules") {
        cfg.sweep_rules = v.list;
      } else {
        p.error(v.line, key, "unknown key");
      }
    });
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    // Attach the line of the offending field when we know it.
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    const std::string field = msg.substr(0, colon);
    const auto it = kv.find(field);
    if (it != kv.end()) {
      p.error(it->second.line, field, trim(std::string_view(msg).substr(colon + 1)));
    }
    p.error(0, field, trim(std::string_view(msg).substr(colon + 1)));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::config_error, fmt::format("cannot open config {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string render_config(const ExperimentConfig& c) {
  std::string out;
  auto put = [&out](std::string_view k, const std::string& v) {
    out += fmt::format("{} = {}\n", k, v);
  };
  put("oracle.kind", std::string(to_string(c.oracle.kind)));
  put("oracle.epsilon", fmt::format("{}", c.oracle.epsilon));
  put("oracle.n", fmt::format("{}", c.oracle.n));
  put("oracle.d", fmt::format("{}", c.oracle.d));
  put("oracle.noise_std", fmt::format("{}", c.oracle.noise_std));
  if (c.oracle.region_radius) put("oracle.region_radius", fmt::format("{}", *c.oracle.region_radius));
  if (!c.oracle.sign_pattern.empty()) {
    put("oracle.sign_pattern", fmt::format("[{}]", fmt::join(c.oracle.sign_pattern, ", ")));
  }
  put("oracle.data_seed", fmt::format("{}", c.data_seed));
  put("optimizer.rule", std::string(to_string(c.optimizer.rule)));
  put("optimizer.compressor", fmt::format("\"{}\"", c.optimizer.compressor.to_string()));
  put("optimizer.gamma", fmt::format("{}", c.optimizer.gamma));
  put("optimizer.beta", fmt::format("{}", c.optimizer.beta));
  put("optimizer.projection", fmt::format("\"{}\"", projection_to_string(c.optimizer.projection)));
  put("optimizer.sign_zero", std::string(to_string(c.optimizer.sign_zero)));
  put("run.T", fmt::format("{}", c.T));
  put("run.seeds", fmt::format("[{}]", fmt::join(c.seeds, ", ")));
  switch (c.x0.kind) {
    case InitSpec::Kind::zeros: put("run.x0", "zeros"); break;
    case InitSpec::Kind::ones: put("run.x0", "ones"); break;
    case InitSpec::Kind::gaussian: put("run.x0", "gaussian"); break;
    case InitSpec::Kind::values:
      put("run.x0", fmt::format("[{}]", fmt::join(c.x0.values, ", ")));
      break;
  }
  put("run.x0_scale", fmt::format("{}", c.x0.scale));
  put("run.full_batch", c.record.full_batch ? "true" : "false");
  if (!c.record.decimate_at.empty()) {
    put("run.decimate_at", fmt::format("[{}]", fmt::join(c.record.decimate_at, ", ")));
  }
  put("run.decimate_factor", fmt::format("{}", c.record.decimate_factor));
  put("record.span", c.record.span ? "true" : "false");
  put("record.phi", c.record.phi ? "true" : "false");
  put("record.test_loss", c.record.test_loss ? "true" : "false");
  put("record.every", fmt::format("{}", c.record.every));
  put("record.dense_prefix", fmt::format("{}", c.record.dense_prefix));
  put("record.average", c.record.average ? "true" : "false");
  put("record.iterates", c.write_iterates ? "true" : "false");
  put("output.dir", fmt::format("\"{}\"", c.output_dir.string()));
  put("sweep.lo", fmt::format("{}", c.grid.lo));
  put("sweep.hi", fmt::format("{}", c.grid.hi));
  put("sweep.points", fmt::format("{}", c.grid.points));
  if (!c.sweep_rules.empty()) {
    put("sweep.rules", fmt::format("[{}]", fmt::join(c.sweep_rules, ", ")));
  }
  return out;
}

std::optional<std::vector<std::uint64_t>> seeds_from_env() {
  const char* env = std::getenv("EF_LAB_SEED");
  if (!env || !*env) return std::nullopt;
  Parser p("EF_LAB_SEED");
  const std::string text(env);
  Value v{text, split_list(text), 0};
  auto seeds = parse_seed_list(p, "EF_LAB_SEED", v);
  if (seeds.empty()) p.error(0, "EF_LAB_SEED", "no seeds");
  return seeds;
}

Vector make_x0(const InitSpec& init, std::size_t d, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(d);
  switch (init.kind) {
    case InitSpec::Kind::zeros:
      return Vector::Zero(n);
    case InitSpec::Kind::ones:
      return Vector::Constant(n, init.scale);
    case InitSpec::Kind::gaussian: {
      Rng rng = make_stream(seed, Stream::init);
      std::normal_distribution<double> normal(0.0, init.scale);
      Vector x(n);
      for (Eigen::Index i = 0; i < n; ++i) x[i] = normal(rng);
      return x;
    }
    case InitSpec::Kind::values: {
      if (init.values.size() != d) {
        fail(ErrorCode::config_error,
             fmt::format("run.x0: has {} entries, oracle dimension is {}", init.values.size(), d));
      }
      Vector x(n);
      for (Eigen::Index i = 0; i < n; ++i) x[i] = init.values[static_cast<std::size_t>(i)];
      return x;
    }
  }
  return Vector::Zero(n);
}

}  // namespace eflab
