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
#include "eflab/eflab.h"

#include <cstring>
#include <memory>
#include <mutex>
#include <new>
#include <string>

#include <fmt/format.h>

#include "eflab/analysis.hpp"
#include "eflab/compressors.hpp"
#include "eflab/config.hpp"
#include "eflab/error.hpp"
#include "eflab/experiment.hpp"
#include "eflab/optimizers.hpp"
#include "eflab/oracles.hpp"
#include "eflab/reproduce.hpp"
#include "eflab/selfcheck.hpp"

struct eflab_oracle {
  std::unique_ptr<eflab::Oracle> impl;
  eflab::Rng sampling;
};

struct eflab_optimizer {
  eflab::OptimizerSpec spec;
  eflab::OptimizerState state;
  eflab::Rng rng;
};

namespace {

using eflab::ErrorCode;
using eflab::Vector;

thread_local std::string g_last_error;

eflab_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return EFLAB_E_INVALID_ARGUMENT;
    case ErrorCode::dimension_mismatch: return EFLAB_E_DIMENSION;
    case ErrorCode::numeric_failure: return EFLAB_E_NUMERIC;
    case ErrorCode::config_error: return EFLAB_E_CONFIG;
    case ErrorCode::io_error: return EFLAB_E_IO;
  }
  return EFLAB_E_INTERNAL;
}

template <typename Fn>
eflab_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return EFLAB_OK;
  } catch (const eflab::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return EFLAB_E_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return EFLAB_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EFLAB_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return EFLAB_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) eflab::fail(ErrorCode::invalid_argument, fmt::format("{} is NULL", what));
}

Vector in_vec(const double* p, std::size_t d, const char* what) {
  need(p, what);
  return Eigen::Map<const Vector>(p, static_cast<Eigen::Index>(d));
}

void out_vec(const Vector& v, double* p) {
  std::memcpy(p, v.data(), sizeof(double) * static_cast<std::size_t>(v.size()));
}

void check_dim(std::size_t have, std::size_t want) {
  if (have != want) {
    eflab::fail(ErrorCode::dimension_mismatch,
                fmt::format("vector has {} entries, expected {}", have, want));
  }
}

eflab::Reporter reporter(eflab_message_fn fn, void* user) {
  if (fn == nullptr) return {};
  auto mu = std::make_shared<std::mutex>();
  return [fn, user, mu](std::string_view line) {
    std::lock_guard lock(*mu);
    const std::string s(line);
    fn(s.c_str(), user);
  };
}

eflab::ExperimentConfig load_with_overrides(const char* path, const char* out_dir) {
  need(path, "path");
  auto cfg = eflab::load_config(path);
  if (out_dir != nullptr) cfg.output_dir = out_dir;
  if (auto seeds = eflab::seeds_from_env()) {
    cfg.seeds = *seeds;
    cfg.validate();
  }
  return cfg;
}

}  // namespace

extern "C" {

const char* eflab_version(void) { return EFLAB_VERSION; }

const char* eflab_last_error(void) { return g_last_error.c_str(); }

eflab_status eflab_oracle_create(const char* kind, double epsilon, size_t d, size_t n,
                                 uint64_t data_seed, eflab_oracle** out) {
  return guarded([&] {
    need(kind, "kind");
    need(out, "out");
    *out = nullptr;
    eflab::OracleParams p;
    p.kind = eflab::parse_oracle_kind(kind);
    p.epsilon = epsilon;
    if (d != 0) p.d = d;
    p.n = n;
    if (n == 0 && p.kind != eflab::OracleKind::theorem1) p.n = eflab::OracleParams{}.n;
    auto h = std::make_unique<eflab_oracle>();
    h->impl = eflab::build_oracle(p, data_seed);
    h->sampling = eflab::make_stream(data_seed, eflab::Stream::oracle_sampling);
    *out = h.release();
  });
}

void eflab_oracle_destroy(eflab_oracle* oracle) { delete oracle; }

eflab_status eflab_oracle_dim(const eflab_oracle* oracle, size_t* d) {
  return guarded([&] {
    need(oracle, "oracle");
    need(d, "d");
    *d = oracle->impl->dim();
  });
}

eflab_status eflab_oracle_loss(const eflab_oracle* oracle, const double* x, size_t d,
                               double* loss) {
  return guarded([&] {
    need(oracle, "oracle");
    need(loss, "loss");
    check_dim(d, oracle->impl->dim());
    *loss = oracle->impl->loss_value(in_vec(x, d, "x"));
  });
}

eflab_status eflab_oracle_gradient(const eflab_oracle* oracle, const double* x, size_t d,
                                   double* g) {
  return guarded([&] {
    need(oracle, "oracle");
    need(g, "g");
    check_dim(d, oracle->impl->dim());
    out_vec(oracle->impl->full_gradient(in_vec(x, d, "x")), g);
  });
}

eflab_status eflab_oracle_sample(eflab_oracle* oracle, const double* x, size_t d, double* g) {
  return guarded([&] {
    need(oracle, "oracle");
    need(g, "g");
    check_dim(d, oracle->impl->dim());
    out_vec(oracle->impl->sample_gradient(in_vec(x, d, "x"), oracle->sampling).g, g);
  });
}

eflab_status eflab_oracle_reseed(eflab_oracle* oracle, uint64_t seed) {
  return guarded([&] {
    need(oracle, "oracle");
    oracle->sampling = eflab::make_stream(seed, eflab::Stream::oracle_sampling);
  });
}

eflab_status eflab_optimizer_create(const char* rule, const char* compressor, double gamma,
                                    double beta, const char* sign_zero, const double* x0,
                                    size_t d, uint64_t seed, eflab_optimizer** out) {
  return guarded([&] {
    need(rule, "rule");
    need(out, "out");
    *out = nullptr;
    if (d == 0) eflab::fail(ErrorCode::invalid_argument, "d must be >= 1");
    eflab::OptimizerSpec spec;
    spec.rule = eflab::parse_rule(rule);
    if (compressor != nullptr) spec.compressor = eflab::CompressorSpec::parse(compressor);
    spec.gamma = gamma;
    spec.beta = beta;
    if (sign_zero != nullptr) {
      spec.sign_zero = eflab::parse_sign_zero(sign_zero);
      spec.compressor.sign_zero = spec.sign_zero;
    }
    spec.validate(d);
    auto h = std::make_unique<eflab_optimizer>();
    h->spec = spec;
    h->state = eflab::init_state(spec, in_vec(x0, d, "x0"));
    h->rng = eflab::make_stream(seed, eflab::Stream::compressor);
    *out = h.release();
  });
}

void eflab_optimizer_destroy(eflab_optimizer* opt) { delete opt; }

eflab_status eflab_optimizer_step(eflab_optimizer* opt, const double* g, size_t d) {
  return guarded([&] {
    need(opt, "optimizer");
    check_dim(d, static_cast<std::size_t>(opt->state.x.size()));
    opt->state = eflab::step(opt->spec, opt->state, in_vec(g, d, "g"), opt->rng);
  });
}

eflab_status eflab_optimizer_get(const eflab_optimizer* opt, double* x, double* e, double* m,
                                 size_t d, uint64_t* steps) {
  return guarded([&] {
    need(opt, "optimizer");
    check_dim(d, static_cast<std::size_t>(opt->state.x.size()));
    if (x) out_vec(opt->state.x, x);
    if (e) out_vec(opt->state.e, e);
    if (m) out_vec(opt->state.m, m);
    if (steps) *steps = opt->state.t;
  });
}

eflab_status eflab_compress(const char* spec, const char* sign_zero, const double* v, size_t d,
                            uint64_t seed, double* out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    auto c = eflab::CompressorSpec::parse(spec);
    if (sign_zero != nullptr) c.sign_zero = eflab::parse_sign_zero(sign_zero);
    c.validate(d);
    eflab::Rng rng = eflab::make_stream(seed, eflab::Stream::compressor);
    out_vec(eflab::compress(c, in_vec(v, d, "v"), rng), out);
  });
}

eflab_status eflab_density_phi(const double* v, size_t d, double* phi) {
  return guarded([&] {
    need(phi, "phi");
    *phi = eflab::density_phi(in_vec(v, d, "v"));
  });
}

eflab_status eflab_contraction_delta(const double* v, const double* c, size_t d, double* delta) {
  return guarded([&] {
    need(delta, "delta");
    *delta = eflab::contraction_delta(in_vec(v, d, "v"), in_vec(c, d, "c"));
  });
}

eflab_status eflab_bits_per_step(const char* spec, size_t d, uint64_t* bits) {
  return guarded([&] {
    need(spec, "spec");
    need(bits, "bits");
    *bits = eflab::bits_per_step(eflab::CompressorSpec::parse(spec), d);
  });
}

eflab_status eflab_min_norm_solution(const double* a, size_t rows, size_t cols, const double* y,
                                     double* x) {
  return guarded([&] {
    need(a, "a");
    need(x, "x");
    const eflab::DenseMatrix m = Eigen::Map<const eflab::DenseMatrix>(
        a, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    out_vec(eflab::min_norm_solution(m, in_vec(y, rows, "y")), x);
  });
}

eflab_status eflab_lemma2_bound(double gamma, double sigma_sq, double delta, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = eflab::lemma2_bound(gamma, sigma_sq, delta);
  });
}

eflab_status eflab_theorem2_bound(double f0, double L, double sigma_sq, double delta,
                                  double gamma, uint64_t T, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = eflab::theorem2_bound(f0, L, sigma_sq, delta, gamma, T);
  });
}

eflab_status eflab_sgd_nonconvex_bound(double f0, double L, double sigma_sq, uint64_t T,
                                       double* out) {
  return guarded([&] {
    need(out, "out");
    *out = eflab::sgd_nonconvex_bound(f0, L, sigma_sq, T);
  });
}

eflab_status eflab_theorem3_bound(double dist0_sq, double gamma, uint64_t T, double sigma_sq,
                                  double delta, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = eflab::theorem3_bound(dist0_sq, gamma, T, sigma_sq, delta);
  });
}

eflab_status eflab_run_config(const char* path, const char* out_dir, unsigned jobs,
                              eflab_message_fn fn, void* user) {
  return guarded([&] {
    const auto cfg = load_with_overrides(path, out_dir);
    const auto report = reporter(fn, user);
    const auto out = eflab::run_experiment(cfg, jobs, report);
    if (report) {
      report(fmt::format("wrote {} trace file(s) and summary.csv to {}", out.summaries.size(),
                         out.dir.string()));
    }
  });
}

eflab_status eflab_sweep_config(const char* path, const char* out_dir, unsigned jobs,
                                eflab_message_fn fn, void* user) {
  return guarded([&] {
    const auto cfg = load_with_overrides(path, out_dir);
    eflab::sweep_experiment(cfg, jobs, reporter(fn, user));
  });
}

eflab_status eflab_reproduce(const char* name, const char* out_dir, unsigned jobs, int svg,
                             uint64_t toy_iteration, int* passed, eflab_message_fn fn,
                             void* user) {
  return guarded([&] {
    need(name, "name");
    need(passed, "passed");
    eflab::ReproduceOptions opts;
    if (out_dir != nullptr) opts.out_dir = out_dir;
    opts.jobs = jobs;
    opts.svg = svg != 0;
    if (toy_iteration != 0) opts.toy_a1_iteration = toy_iteration;
    const auto report = reporter(fn, user);
    const auto verdict = eflab::reproduce(name, opts, report);
    if (report) report(verdict.render());
    *passed = verdict.pass() ? 1 : 0;
  });
}

eflab_status eflab_selftest(uint64_t seed, int* passed, eflab_message_fn fn, void* user) {
  return guarded([&] {
    need(passed, "passed");
    const auto report = reporter(fn, user);
    bool ok = true;
    for (const auto& r : eflab::run_selftest(seed)) {
      ok = ok && r.pass;
      if (report) {
        report(fmt::format("[{}] {}: {} ({})", r.pass ? "PASS" : "FAIL", r.group, r.name,
                           r.detail));
      }
    }
    *passed = ok ? 1 : 0;
  });
}

eflab_status eflab_export_data(size_t n, uint64_t data_seed, const char* path) {
  return guarded([&] {
    need(path, "path");
    eflab::export_wilson(n, data_seed, path);
  });
}

}  // extern "C"
