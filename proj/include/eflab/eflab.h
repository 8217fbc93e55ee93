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
/* C interface to ef-lab. Every function returns an eflab_status; on
 * failure eflab_last_error() describes the problem for the calling thread.
 * Vectors are caller-owned arrays of doubles whose length is passed
 * explicitly and checked against the handle's dimension. */
#ifndef EFLAB_EFLAB_H_
#define EFLAB_EFLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(EFLAB_BUILDING_LIBRARY)
#define EFLAB_API __attribute__((visibility("default")))
#else
#define EFLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eflab_status {
  EFLAB_OK = 0,
  EFLAB_E_INVALID_ARGUMENT = 1,
  EFLAB_E_DIMENSION = 2,
  EFLAB_E_NUMERIC = 3,
  EFLAB_E_CONFIG = 4,
  EFLAB_E_IO = 5,
  EFLAB_E_INTERNAL = 6
} eflab_status;

typedef struct eflab_oracle eflab_oracle;
typedef struct eflab_optimizer eflab_optimizer;

/* Receives progress and report lines; may be called from worker threads,
 * but never concurrently. */
typedef void (*eflab_message_fn)(const char* line, void* user);

EFLAB_API const char* eflab_version(void);
/* Message of the last failed call on this thread ("" if none). */
EFLAB_API const char* eflab_last_error(void);

/* ---- oracles ---------------------------------------------------------- */

/* kind: ce1, ce2, ce3, theorem1, sparse_noise, wilson, least_squares.
 * epsilon applies to ce2/ce3, d to sparse_noise/theorem1/least_squares,
 * n to wilson/least_squares/theorem1 (0 = 2d for theorem1). */
EFLAB_API eflab_status eflab_oracle_create(const char* kind, double epsilon, size_t d, size_t n,
                                           uint64_t data_seed, eflab_oracle** out);
EFLAB_API void eflab_oracle_destroy(eflab_oracle* oracle);
EFLAB_API eflab_status eflab_oracle_dim(const eflab_oracle* oracle, size_t* d);
EFLAB_API eflab_status eflab_oracle_loss(const eflab_oracle* oracle, const double* x, size_t d,
                                         double* loss);
EFLAB_API eflab_status eflab_oracle_gradient(const eflab_oracle* oracle, const double* x,
                                             size_t d, double* g);
/* Draws from the handle's own sampling stream; reseed to restart it. */
EFLAB_API eflab_status eflab_oracle_sample(eflab_oracle* oracle, const double* x, size_t d,
                                           double* g);
EFLAB_API eflab_status eflab_oracle_reseed(eflab_oracle* oracle, uint64_t seed);

/* ---- optimizers ------------------------------------------------------- */

/* rule: ec_sgd, sgd, sgd_momentum, sign_sgd, sign_sgd_scaled, signum.
 * compressor: e.g. "sign_scaled", "top_k:3" (ec_sgd only, else NULL).
 * sign_zero: "plus_one" (default when NULL) or "zero". */
EFLAB_API eflab_status eflab_optimizer_create(const char* rule, const char* compressor,
                                              double gamma, double beta, const char* sign_zero,
                                              const double* x0, size_t d, uint64_t seed,
                                              eflab_optimizer** out);
EFLAB_API void eflab_optimizer_destroy(eflab_optimizer* opt);
EFLAB_API eflab_status eflab_optimizer_step(eflab_optimizer* opt, const double* g, size_t d);
/* Any of x, e, m may be NULL. */
EFLAB_API eflab_status eflab_optimizer_get(const eflab_optimizer* opt, double* x, double* e,
                                           double* m, size_t d, uint64_t* steps);

/* ---- compressors and linear algebra ---------------------------------- */

EFLAB_API eflab_status eflab_compress(const char* spec, const char* sign_zero, const double* v,
                                      size_t d, uint64_t seed, double* out);
EFLAB_API eflab_status eflab_density_phi(const double* v, size_t d, double* phi);
EFLAB_API eflab_status eflab_contraction_delta(const double* v, const double* c, size_t d,
                                               double* delta);
EFLAB_API eflab_status eflab_bits_per_step(const char* spec, size_t d, uint64_t* bits);
/* a is rows x cols, row-major, rows <= cols; x has cols entries. */
EFLAB_API eflab_status eflab_min_norm_solution(const double* a, size_t rows, size_t cols,
                                               const double* y, double* x);

/* ---- bounds ----------------------------------------------------------- */

EFLAB_API eflab_status eflab_lemma2_bound(double gamma, double sigma_sq, double delta,
                                          double* out);
EFLAB_API eflab_status eflab_theorem2_bound(double f0, double L, double sigma_sq, double delta,
                                            double gamma, uint64_t T, double* out);
EFLAB_API eflab_status eflab_sgd_nonconvex_bound(double f0, double L, double sigma_sq,
                                                 uint64_t T, double* out);
EFLAB_API eflab_status eflab_theorem3_bound(double dist0_sq, double gamma, uint64_t T,
                                            double sigma_sq, double delta, double* out);

/* ---- drivers ---------------------------------------------------------- */

/* out_dir overrides output.dir when non-NULL. EF_LAB_SEED overrides
 * run.seeds. */
EFLAB_API eflab_status eflab_run_config(const char* path, const char* out_dir, unsigned jobs,
                                        eflab_message_fn fn, void* user);
EFLAB_API eflab_status eflab_sweep_config(const char* path, const char* out_dir, unsigned jobs,
                                          eflab_message_fn fn, void* user);
/* *passed is 1 for a PASS verdict and 0 for FAIL. toy_iteration = 0 keeps
 * the default comparison step. */
EFLAB_API eflab_status eflab_reproduce(const char* name, const char* out_dir, unsigned jobs,
                                       int svg, uint64_t toy_iteration, int* passed,
                                       eflab_message_fn fn, void* user);
EFLAB_API eflab_status eflab_selftest(uint64_t seed, int* passed, eflab_message_fn fn,
                                      void* user);
EFLAB_API eflab_status eflab_export_data(size_t n, uint64_t data_seed, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* EFLAB_EFLAB_H_ */
