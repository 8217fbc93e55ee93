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
#include "eflab/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "eflab/analysis.hpp"
#include "eflab/compressors.hpp"
#include "eflab/error.hpp"
#include "eflab/optimizers.hpp"
#include "eflab/oracles.hpp"

namespace eflab {

namespace {

Vector gaussian(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = n(rng);
  return v;
}

DenseMatrix gaussian_matrix(Eigen::Index r, Eigen::Index c, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  DenseMatrix a(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) a(i, j) = n(rng);
  }
  return a;
}

class Collector {
 public:
  explicit Collector(std::string group) : group_(std::move(group)) {}
  void add(std::string name, bool pass, std::string detail) {
    out_.push_back({group_, std::move(name), pass, std::move(detail)});
  }
  std::vector<CheckResult> take() { return std::move(out_); }

 private:
  std::string group_;
  std::vector<CheckResult> out_;
};

}  // namespace

std::vector<CheckResult> check_linalg(std::uint64_t seed) {
  Collector c("linalg");
  Rng rng = make_stream(seed, Stream::oracle_data);
  double idem = 0.0, pyth = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index d = 2 + trial % 30;
    SpanBasis b(d);
    const int r = 1 + trial % static_cast<int>(d);
    for (int i = 0; i < r; ++i) b.extend(gaussian(d, rng));
    const Vector v = gaussian(d, rng);
    const Vector p = b.project(v);
    idem = std::max(idem, (b.project(p) - p).cwiseAbs().maxCoeff());
    const double lhs = v.squaredNorm();
    const double rhs = p.squaredNorm() + (v - p).squaredNorm();
    pyth = std::max(pyth, std::abs(lhs - rhs) / lhs);
  }
  c.add("projection idempotent", idem <= 1e-10, fmt::format("max entry error {:.3g}", idem));
  c.add("Pythagoras", pyth <= 1e-8, fmt::format("max relative error {:.3g}", pyth));

  double in_span = 0.0;
  bool minimal = true;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index m = 2 + trial % 8;
    const Eigen::Index n = m + 1 + trial % 10;
    const DenseMatrix a = gaussian_matrix(m, n, rng);
    const Vector y = gaussian(m, rng);
    const Vector x = min_norm_solution(a, y);
    SpanBasis rows(n);
    for (Eigen::Index i = 0; i < m; ++i) rows.extend(a.row(i).transpose());
    in_span = std::max(in_span, (rows.project(x) - x).norm() / std::max(1.0, x.norm()));
    // Another solution: add a null-space component.
    const Vector z = gaussian(n, rng);
    const Vector null = z - rows.project(z);
    const Vector other = x + null;
    minimal = minimal && (a * other - y).norm() <= 1e-8 * (1.0 + y.norm()) &&
              x.norm() <= other.norm();
  }
  c.add("min-norm solution lies in the row span", in_span <= 1e-8,
        fmt::format("max relative residual {:.3g}", in_span));
  c.add("min-norm solution is minimal among solutions", minimal, "20 random systems");
  return c.take();
}

std::vector<CheckResult> check_compressors(std::uint64_t seed) {
  Collector c("compressors");
  Rng data = make_stream(seed, Stream::oracle_data);
  Rng crng = make_stream(seed, Stream::compressor);
  constexpr std::size_t kVectors = 10000;
  const std::size_t dims[] = {2, 10, 100};

  // delta-contract for deterministic kinds.
  for (const std::size_t d : dims) {
    const std::size_t k = std::max<std::size_t>(1, d / 4);
    const CompressorSpec specs[] = {CompressorSpec::identity(), CompressorSpec::sign_scaled(),
                                    CompressorSpec::top_k(k)};
    for (const auto& spec : specs) {
      double worst = std::numeric_limits<double>::infinity();
      bool ok = true;
      for (std::size_t i = 0; i < kVectors; ++i) {
        const Vector v = gaussian(static_cast<Eigen::Index>(d), data);
        const double delta = contraction_delta(v, compress(spec, v, crng));
        const double need = spec.kind == CompressorKind::sign_scaled
                                ? density_phi(v)
                                : *spec.guaranteed_delta(d);
        worst = std::min(worst, delta - need);
        ok = ok && delta >= need - 1e-12;
      }
      c.add(fmt::format("delta-contract {} d={}", spec.to_string(), d), ok,
            fmt::format("min(delta - guaranteed) = {:.3g}", worst));
    }
    // rand_k_feedback: in expectation over the mask, per vector.
    const auto fb = CompressorSpec::rand_k_feedback(k);
    // Equality holds in expectation, so the band is two-sided noise only.
    bool ok = true;
    double worst_ratio = 0.0, worst_z = 0.0;
    for (int j = 0; j < 20; ++j) {
      const Vector v = gaussian(static_cast<Eigen::Index>(d), data);
      double mean = 0.0, sq = 0.0;
      for (std::size_t i = 0; i < kVectors; ++i) {
        const double err = (compress(fb, v, crng) - v).squaredNorm();
        mean += err;
        sq += err * err;
      }
      const double S = static_cast<double>(kVectors);
      mean /= S;
      const double se = std::sqrt(std::max(0.0, sq / S - mean * mean) / (S - 1.0));
      const double bound = (1.0 - static_cast<double>(k) / static_cast<double>(d)) * v.squaredNorm();
      ok = ok && mean <= bound + 4.0 * se;
      worst_ratio = std::max(worst_ratio, mean / bound);
      if (se > 0.0) worst_z = std::max(worst_z, (mean - bound) / se);
    }
    c.add(fmt::format("delta-contract rand_k_feedback:{} d={} (expectation)", k, d), ok,
          fmt::format("max mean error / (1-k/d)|v|^2 = {:.4g}, max z = {:.3g}",
                      worst_ratio, worst_z));
  }

  // Unbiasedness and second moment of rand_k_unbiased.
  for (const std::size_t d : dims) {
    const std::size_t k = std::max<std::size_t>(1, d / 4);
    const auto spec = CompressorSpec::rand_k_unbiased(k);
    const auto n = static_cast<Eigen::Index>(d);
    const Vector v = gaussian(n, data);
    constexpr std::size_t kSamples = 100000;
    Vector sum = Vector::Zero(n), sum_sq = Vector::Zero(n);
    double norm_sum = 0.0, norm_sq = 0.0;
    for (std::size_t i = 0; i < kSamples; ++i) {
      const Vector u = compress(spec, v, crng);
      sum += u;
      sum_sq += u.cwiseProduct(u);
      const double q = u.squaredNorm();
      norm_sum += q;
      norm_sq += q * q;
    }
    const double S = static_cast<double>(kSamples);
    const Vector mean = sum / S;
    double worst_z = 0.0;
    bool ok = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double var = std::max(0.0, sum_sq[i] / S - mean[i] * mean[i]) * S / (S - 1.0);
      const double se = std::sqrt(var / S);
      const double dev = std::abs(mean[i] - v[i]);
      ok = ok && dev <= 4.0 * se;
      if (se > 0.0) worst_z = std::max(worst_z, dev / se);
    }
    c.add(fmt::format("rand_k_unbiased:{} d={} unbiased (4 SE)", k, d), ok,
          fmt::format("max |z| = {:.3g}", worst_z));
    const double m2 = norm_sum / S;
    const double se2 = std::sqrt(std::max(0.0, norm_sq / S - m2 * m2) / (S - 1.0));
    const double bound = static_cast<double>(d) / static_cast<double>(k) * v.squaredNorm();
    c.add(fmt::format("rand_k_unbiased:{} d={} second moment", k, d),
          m2 <= bound * (1.0 + 3.0 * se2 / std::max(m2, 1e-300)),
          fmt::format("E|U(v)|^2 = {:.5g}, (d/k)|v|^2 = {:.5g}", m2, bound));
  }

  // Feedback vs unbiased under one mask.
  {
    bool exact = true;
    double rel = 0.0;
    for (const std::size_t d : dims) {
      for (std::size_t k = 1; k <= d; k += std::max<std::size_t>(1, d / 5)) {
        for (int j = 0; j < 50; ++j) {
          const Vector v = gaussian(static_cast<Eigen::Index>(d), data);
          const std::uint64_t s = data();
          Rng r1 = make_stream(s, Stream::compressor);
          Rng r2 = make_stream(s, Stream::compressor);
          const Vector f = compress(CompressorSpec::rand_k_feedback(k), v, r1);
          const Vector u = compress(CompressorSpec::rand_k_unbiased(k), v, r2);
          const double scale = static_cast<double>(d) / static_cast<double>(k);
          for (Eigen::Index i = 0; i < v.size(); ++i) {
            exact = exact && (scale * f[i] == u[i]) && ((f[i] == 0.0) == (u[i] == 0.0));
          }
          const Vector back = (static_cast<double>(k) / static_cast<double>(d)) * u;
          rel = std::max(rel, (back - f).norm() / std::max(f.norm(), 1e-300));
        }
      }
    }
    c.add("rand_k_feedback = (k/d) rand_k_unbiased under the same mask",
          exact && rel <= 4.0 * std::numeric_limits<double>::epsilon(),
          fmt::format("(d/k) feedback == unbiased bit-exactly; max relative rounding of "
                      "(k/d) unbiased vs feedback {:.3g}",
                      rel));
  }

  // density_phi range.
  {
    bool ok = true;
    double lo = 1.0, hi = 0.0;
    for (const std::size_t d : dims) {
      const auto n = static_cast<Eigen::Index>(d);
      std::vector<Vector> vs;
      for (Eigen::Index i = 0; i < n; ++i) vs.push_back(Vector::Unit(n, i) * (i % 2 ? -3.0 : 2.0));
      vs.push_back(Vector::Constant(n, 1.5));
      vs.push_back(Vector::Constant(n, -1e-100));
      for (int j = 0; j < 1000; ++j) vs.push_back(gaussian(n, data));
      for (const auto& v : vs) {
        const double phi = density_phi(v);
        const double dd = static_cast<double>(d);
        ok = ok && phi >= 1.0 / dd * (1.0 - 1e-12) && phi <= 1.0 + 1e-12;
        lo = std::min(lo, phi * dd);
        hi = std::max(hi, phi);
      }
    }
    c.add("density_phi in [1/d, 1]", ok,
          fmt::format("min d*phi = {:.6g}, max phi = {:.6g}", lo, hi));
  }

  // sign_scaled l1 preservation.
  {
    double worst = 0.0;
    for (const std::size_t d : dims) {
      for (int j = 0; j < 1000; ++j) {
        const Vector v = gaussian(static_cast<Eigen::Index>(d), data);
        const Vector cv = compress(CompressorSpec::sign_scaled(), v, crng);
        worst = std::max(worst, std::abs(l1_norm(cv) - l1_norm(v)) / l1_norm(v));
      }
    }
    c.add("sign_scaled preserves the l1 norm", worst <= 1e-12,
          fmt::format("max relative error {:.3g}", worst));
  }
  return c.take();
}

std::vector<CheckResult> check_oracles(std::uint64_t seed) {
  Collector c("oracles");
  constexpr std::size_t kSamples = 100000;
  Rng pts = make_stream(seed, Stream::init);
  Rng smp = make_stream(seed, Stream::oracle_sampling);

  struct Case {
    OracleParams p;
    std::string label;
  };
  std::vector<Case> cases;
  auto add = [&](OracleKind k, std::string label, std::size_t d = 100, std::size_t n = 200) {
    OracleParams p;
    p.kind = k;
    p.d = d;
    p.n = n;
    cases.push_back({p, std::move(label)});
  };
  add(OracleKind::ce1, "ce1");
  add(OracleKind::ce2, "ce2");
  add(OracleKind::ce3, "ce3");
  add(OracleKind::theorem1, "theorem1", 5, 0);
  add(OracleKind::sparse_noise, "sparse_noise", 10);
  add(OracleKind::wilson, "wilson", 100, 20);
  add(OracleKind::least_squares, "least_squares", 4, 12);

  for (const auto& cs : cases) {
    const auto oracle = build_oracle(cs.p, seed);
    const auto d = static_cast<Eigen::Index>(oracle->dim());
    const auto& meta = oracle->meta();
    bool unbiased = true, moment = true;
    double worst_z = 0.0, worst_ratio = 0.0;
    for (int point = 0; point < 5; ++point) {
      Vector x = gaussian(d, pts);
      if (meta.domain) {
        std::uniform_real_distribution<double> u(meta.domain->lo, meta.domain->hi);
        for (Eigen::Index i = 0; i < d; ++i) x[i] = u(pts);
      } else if (meta.region_radius) {
        x *= 0.9 * *meta.region_radius / x.norm();
      }
      Vector sum = Vector::Zero(d), sum_sq = Vector::Zero(d);
      double m2 = 0.0, m2sq = 0.0;
      for (std::size_t i = 0; i < kSamples; ++i) {
        const Vector g = oracle->sample_gradient(x, smp).g;
        sum += g;
        sum_sq += g.cwiseProduct(g);
        const double q = g.squaredNorm();
        m2 += q;
        m2sq += q * q;
      }
      const double S = static_cast<double>(kSamples);
      const Vector mean = sum / S;
      const Vector full = oracle->full_gradient(x);
      for (Eigen::Index i = 0; i < d; ++i) {
        const double sd = std::sqrt(std::max(0.0, sum_sq[i] / S - mean[i] * mean[i]));
        const double dev = std::abs(mean[i] - full[i]);
        const double lim = 4.0 * sd / std::sqrt(S);
        // Deterministic coordinates only carry summation rounding.
        unbiased = unbiased && dev <= lim + 1e-9 * (1.0 + std::abs(full[i]));
        if (sd > 0.0) worst_z = std::max(worst_z, dev / (sd / std::sqrt(S)));
      }
      if (meta.sigma_sq) {
        m2 /= S;
        const double se = std::sqrt(std::max(0.0, m2sq / S - m2 * m2) / (S - 1.0));
        moment = moment && m2 <= *meta.sigma_sq * (1.0 + 3.0 * se / std::max(m2, 1e-300));
        worst_ratio = std::max(worst_ratio, m2 / *meta.sigma_sq);
      }
    }
    c.add(cs.label + " sample gradient unbiased (4 SE)", unbiased,
          fmt::format("max |z| = {:.3g}", worst_z));
    if (meta.sigma_sq) {
      c.add(cs.label + " second moment <= sigma^2", moment,
            fmt::format("max E|g|^2 / sigma^2 = {:.4g}", worst_ratio));
    }
  }

  // ce3 sign trap, exhaustive over both components on a grid of x1 + x2 > 0.
  {
    const Ce3Oracle ce3(0.5, std::sqrt(2.0));
    bool ok = true;
    std::size_t tested = 0;
    for (int i = -40; i <= 40; ++i) {
      for (int j = -40; j <= 40; ++j) {
        Vector x(2);
        x << i * 0.1, j * 0.1 + 1e-3;
        if (!(x[0] + x[1] > 0.0)) continue;
        for (const Vector* a : {&ce3.a1(), &ce3.a2()}) {
          const Vector g = 2.0 * a->dot(x) * *a;
          const Vector s = sign_vector(g);
          ok = ok && ((s[0] == 1.0 && s[1] == -1.0) || (s[0] == -1.0 && s[1] == 1.0));
          ++tested;
        }
      }
    }
    // The oracle itself must only emit these two components.
    Rng r = make_stream(seed, Stream::oracle_sampling);
    Vector x(2);
    x << 0.3, 0.8;
    for (int i = 0; i < 1000; ++i) {
      const Vector s = sign_vector(ce3.sample_gradient(x, r).g);
      ok = ok && s[0] == -s[1];
    }
    c.add("ce3 sign trap: sgn(g) = +/-(1,-1) when x1 + x2 > 0", ok,
          fmt::format("{} grid evaluations", tested));
  }

  {
    bool ok = true;
    for (std::uint64_t s = 1; s <= 20; ++s) {
      OracleParams p;
      p.kind = OracleKind::theorem1;
      p.d = 2 + s % 19;
      p.n = 0;
      const auto o = build_oracle(p, s);
      ok = ok && dynamic_cast<const Theorem1Oracle&>(*o).sign_pattern_holds();
    }
    c.add("theorem1 rows satisfy sgn(a_i) = +/- s", ok, "20 instances");
  }

  {
    Rng r = make_stream(seed, Stream::oracle_data);
    const WilsonData w = generate_wilson(200, r);
    bool ok = w.a.rows() == 200 && w.a.cols() == 1200;
    for (Eigen::Index i = 0; i < w.a.rows(); ++i) {
      Eigen::Index nnz = 0;
      for (Eigen::Index j = 0; j < w.a.cols(); ++j) nnz += w.a(i, j) != 0.0;
      ok = ok && nnz == (w.y[i] > 0 ? 4 : 8);
    }
    bool full_rank = true;
    try {
      min_norm_solution(w.a, w.y);
    } catch (const Error&) {
      full_rank = false;
    }
    c.add("wilson rows have 4 (y=+1) or 8 (y=-1) nonzeros", ok, "n = 200, d = 1200");
    c.add("wilson design has full row rank", full_rank, "min_norm_solution succeeded");
  }
  return c.take();
}

std::vector<CheckResult> check_optimizers(std::uint64_t seed) {
  Collector c("optimizers");
  std::vector<std::unique_ptr<Oracle>> oracles;
  for (const auto kind : {OracleKind::ce1, OracleKind::ce2, OracleKind::ce3, OracleKind::theorem1,
                          OracleKind::sparse_noise, OracleKind::least_squares}) {
    OracleParams p;
    p.kind = kind;
    p.d = 10;
    p.n = kind == OracleKind::theorem1 ? 0 : 30;
    oracles.push_back(build_oracle(p, seed));
  }
  const CompressorSpec comps[] = {CompressorSpec::identity(), CompressorSpec::sign_scaled(),
                                  CompressorSpec::sign_raw(), CompressorSpec::top_k(1),
                                  CompressorSpec::rand_k_unbiased(1),
                                  CompressorSpec::rand_k_feedback(1)};
  Rng init = make_stream(seed, Stream::init);

  double worst = 0.0;
  bool transcript = true;
  bool zero_err = true;
  for (const auto& o : oracles) {
    const auto d = static_cast<Eigen::Index>(o->dim());
    for (const auto& comp : comps) {
      const auto spec = OptimizerSpec::ec_sgd(comp, 0.05);
      const Vector x0 = o->meta().domain ? Vector::Zero(d) : Vector(gaussian(d, init));
      CompensatedSum gsum(d);
      double gnorm = 0.0;
      run(spec, *o, x0, 500, seed, {}, [&](const StepEvent& ev) {
        gsum.add(ev.g);
        gnorm += ev.g.norm();
        const Vector lhs = ev.state.x - ev.state.e;
        const Vector rhs = x0 - spec.gamma * gsum.value();
        const double tol = 1e-9 * (1.0 + x0.norm() + spec.gamma * gnorm);
        const double err = (lhs - rhs).norm();
        worst = std::max(worst, err / tol);
        transcript = transcript && err <= tol;
        if (comp.kind == CompressorKind::identity) zero_err = zero_err && ev.state.e.isZero(0.0);
      });
    }
  }
  c.add("transcript identity x_t - e_t = x_0 - gamma sum g_i", transcript,
        fmt::format("max error / tolerance = {:.3g}", worst));
  c.add("identity compressor leaves e_t = 0", zero_err, "all oracles, 500 steps");

  bool same_signum = true, same_momentum = true;
  for (const auto& o : oracles) {
    const auto d = static_cast<Eigen::Index>(o->dim());
    const Vector x0 = gaussian(d, init);
    auto pair_equal = [&](Rule a, Rule b) {
      const Trace ta = run(OptimizerSpec::simple(a, 0.01, 0.0), *o, x0, 300, seed);
      const Trace tb = run(OptimizerSpec::simple(b, 0.01, 0.0), *o, x0, 300, seed);
      return ta.final_state.x == tb.final_state.x;
    };
    same_signum = same_signum && pair_equal(Rule::signum, Rule::sign_sgd);
    same_momentum = same_momentum && pair_equal(Rule::sgd_momentum, Rule::sgd);
  }
  c.add("signum with beta = 0 equals sign_sgd exactly", same_signum, "all oracles");
  c.add("sgd_momentum with beta = 0 equals sgd exactly", same_momentum, "all oracles");

  bool invariant = true;
  Rng r = make_stream(seed, Stream::oracle_data);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector x0 = gaussian(8, r);
    const Vector g = gaussian(8, r);
    const double scale = std::exp(std::uniform_real_distribution<double>(-20.0, 20.0)(r));
    for (const Rule rule : {Rule::sign_sgd, Rule::signum}) {
      auto spec = OptimizerSpec::simple(rule, 0.1, rule == Rule::signum ? 0.5 : 0.0);
      const auto st = init_state(spec, x0);
      Rng dummy = make_stream(0, Stream::compressor);
      const Vector a = step(spec, st, g, dummy).x - x0;
      const Vector b = step(spec, st, scale * g, dummy).x - x0;
      invariant = invariant && sign_vector(a) == sign_vector(b) && a == b;
    }
  }
  c.add("sign_sgd / signum directions invariant under g -> c g, c > 0", invariant,
        "200 random (x, g, c)");
  return c.take();
}

std::vector<CheckResult> check_analysis(std::uint64_t seed) {
  Collector c("analysis");
  const double deltas[] = {0.05, 0.1, 0.25, 0.5, 0.75, 1.0};
  const double sigmas[] = {0.0, 0.1, 1.0, 10.0, 100.0};
  bool mono2 = true, mono3 = true;
  for (std::size_t i = 0; i < std::size(sigmas); ++i) {
    for (std::size_t j = 0; j < std::size(deltas); ++j) {
      const double b2 = theorem2_bound(1.0, 2.0, sigmas[i], deltas[j], 0.01, 1000);
      const double b3 = theorem3_bound(1.0, 0.01, 1000, sigmas[i], deltas[j]);
      if (j + 1 < std::size(deltas)) {
        mono2 = mono2 && theorem2_bound(1.0, 2.0, sigmas[i], deltas[j + 1], 0.01, 1000) <= b2;
        mono3 = mono3 && theorem3_bound(1.0, 0.01, 1000, sigmas[i], deltas[j + 1]) <= b3;
      }
      if (i + 1 < std::size(sigmas)) {
        mono2 = mono2 && theorem2_bound(1.0, 2.0, sigmas[i + 1], deltas[j], 0.01, 1000) >= b2;
        mono3 = mono3 && theorem3_bound(1.0, 0.01, 1000, sigmas[i + 1], deltas[j]) >= b3;
      }
    }
  }
  c.add("theorem2_bound nonincreasing in delta, nondecreasing in sigma^2", mono2, "6 x 5 grid");
  c.add("theorem3_bound nonincreasing in delta, nondecreasing in sigma^2", mono3, "6 x 5 grid");

  // Averaged-iterate rate on ce2 with top_1.
  {
    OracleParams p;
    p.kind = OracleKind::ce2;
    const auto o = build_oracle(p, seed);
    constexpr std::uint64_t T = 10000;
    const double gamma = 1.0 / std::sqrt(static_cast<double>(T + 1));
    auto spec = OptimizerSpec::ec_sgd(CompressorSpec::top_k(1), gamma);
    RecordingOptions rec;
    rec.every = T;
    rec.average = true;
    Vector x0(2);
    x0 << 1.0, 1.0;
    double mean_gap = 0.0;
    for (std::uint64_t s = 1; s <= 20; ++s) {
      const Trace tr = run(spec, *o, x0, T, s, rec);
      mean_gap += (o->loss_value(*tr.x_average) - *o->meta().f_star) / 20.0;
    }
    const double dist0 = (x0 - *o->meta().x_star).squaredNorm();
    const double bound = theorem3_bound(dist0, gamma, T, *o->meta().sigma_sq, 0.5);
    c.add("ce2 averaged iterate within 1.2 x convex rate", mean_gap <= 1.2 * bound,
          fmt::format("seed-mean f(x_bar) - f* = {:.4g}, bound = {:.4g}", mean_gap, bound));
  }

  // Distance to the gradient span against the residual-error bound.
  {
    OracleParams p;
    p.kind = OracleKind::least_squares;
    p.d = 40;
    p.n = 20;
    const auto o = build_oracle(p, seed);
    constexpr std::uint64_t T = 400;
    const double gamma = 0.01;
    const auto comp = CompressorSpec::top_k(10);
    const double delta = 10.0 / 40.0;
    auto spec = OptimizerSpec::ec_sgd(comp, gamma);
    std::vector<double> mean_dist(T + 1, 0.0);
    double max_g = 0.0;
    constexpr int kSeeds = 20;
    for (int s = 1; s <= kSeeds; ++s) {
      std::vector<Vector> grads, iters{Vector::Zero(40)};
      run(spec, *o, Vector::Zero(40), T, static_cast<std::uint64_t>(s), {},
          [&](const StepEvent& ev) {
            grads.push_back(ev.g);
            iters.push_back(ev.state.x);
            max_g = std::max(max_g, ev.g.squaredNorm());
          });
      const auto series = span_distance_series(grads, iters);
      for (std::size_t t = 0; t < series.size(); ++t) mean_dist[t] += series[t] / kSeeds;
    }
    const double bound = std::sqrt(span_distance_bound_sq(gamma, delta, max_g));
    const double worst = *std::max_element(mean_dist.begin(), mean_dist.end());
    c.add("seed-mean span distance <= 1.2 x sqrt(4 gamma^2 (1-delta)/delta^2 max|g|^2)",
          worst <= 1.2 * bound, fmt::format("max {:.4g}, bound {:.4g}", worst, bound));
  }
  return c.take();
}

std::vector<CheckResult> run_selftest(std::uint64_t seed) {
  std::vector<CheckResult> all;
  for (auto* fn : {check_linalg, check_compressors, check_oracles, check_optimizers,
                   check_analysis}) {
    auto part = fn(seed);
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return all;
}

}  // namespace eflab
