/*
 * Copyright 2026 The bmseq Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of libbmseq: sequence-space norms on Z, block-space bounds,
 * dual certificates and convolution solvers.
 *
 * Every function returns a bm_status. On failure the message is available
 * from bm_last_error() (thread local, valid until the next call on the same
 * thread). Handles are opaque and owned by the caller; release them with
 * the matching *_free function. Strings returned through char** are freed
 * with bm_string_free.
 */

#ifndef BMSEQ_BMSEQ_H
#define BMSEQ_BMSEQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(BMSEQ_BUILDING)
#define BM_API __declspec(dllexport)
#else
#define BM_API __declspec(dllimport)
#endif
#else
#define BM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    BM_OK = 0,
    BM_ERR_INVALID_ARGUMENT = 1,
    BM_ERR_PRECONDITION = 2, /* see bm_last_error_quantity() */
    BM_ERR_TOLERANCE = 3,
    BM_ERR_INTERNAL = 4
} bm_status;

typedef enum { BM_VERDICT_EXACT = 0, BM_VERDICT_TRUNCATED = 1, BM_VERDICT_DIVERGENT = 2 } bm_verdict;

typedef struct bm_seq bm_seq;
typedef struct bm_kernel bm_kernel;
typedef struct bm_block_rep bm_block_rep;
typedef struct bm_dyadic_stream bm_dyadic_stream;

/* 1 <= p < q <= inf, 1 <= r < inf. Use INFINITY for q = inf. */
typedef struct {
    double p;
    double q;
    double r;
} bm_params;

typedef struct {
    double value;
    double remainder_bound; /* +inf for divergent results */
    bm_verdict verdict;
} bm_norm_result;

typedef struct {
    double pairing;
    double local_holder;
    double block_scaled;
    double coefficient_times_norm;
    double slacks[3];
} bm_holder_report;

typedef struct {
    double error_bound;
    double residual;
    double symbol_min_gap;  /* NaN when not computed */
    double operator_bound;  /* 1 + A ||g||_1 (Wiener), 1 + A k/(1-k), k = ||k||_1 (Neumann) */
    double truncated_mass;  /* dropped inverse-kernel mass (Wiener) */
    double contraction;     /* nonlinear solver */
    double residual_bound;  /* nonlinear solver */
    int iterations;         /* Neumann terms or fixed-point iterations */
    size_t resolution;      /* Fourier grid size (Wiener, nonlinear) */
} bm_solve_report;

typedef double (*bm_map_fn)(double value, void* context);

/* ---- library ---------------------------------------------------------- */

BM_API const char* bm_version(void);
BM_API const char* bm_last_error(void);
BM_API double bm_last_error_quantity(void);
BM_API void bm_string_free(char* s);

/* Parses "2", "1.5", "3/2", "inf". */
BM_API bm_status bm_parse_exponent(const char* text, double* out);
BM_API bm_status bm_params_validate(const bm_params* params);
/* Conjugate exponents and beta = r (1/q - 1/p). */
BM_API bm_status bm_params_derived(const bm_params* params, double* p_conj, double* q_conj, double* r_conj,
                                   double* beta);

/* ---- sequences -------------------------------------------------------- */

BM_API bm_status bm_seq_create(const int64_t* indices, const double* values, size_t n, bm_seq** out);
BM_API bm_status bm_seq_zero(bm_seq** out);
BM_API bm_status bm_seq_unit(int64_t index, double value, bm_seq** out);
BM_API bm_status bm_seq_clone(const bm_seq* x, bm_seq** out);
BM_API void bm_seq_free(bm_seq* x);
BM_API size_t bm_seq_size(const bm_seq* x);
/* Copies min(size, capacity) entries in index order. */
BM_API bm_status bm_seq_entries(const bm_seq* x, int64_t* indices, double* values, size_t capacity);
BM_API double bm_seq_get(const bm_seq* x, int64_t index);
BM_API bm_status bm_seq_from_json(const char* text, bm_seq** out);
BM_API bm_status bm_seq_load(const char* path, bm_seq** out);
BM_API bm_status bm_seq_to_json(const bm_seq* x, char** out);
BM_API bm_status bm_seq_save(const bm_seq* x, const char* path);
BM_API bm_status bm_seq_add(const bm_seq* x, const bm_seq* y, bm_seq** out);
BM_API bm_status bm_seq_sub(const bm_seq* x, const bm_seq* y, bm_seq** out);
BM_API bm_status bm_seq_scale(const bm_seq* x, double factor, bm_seq** out);
BM_API bm_status bm_lp_norm(const bm_seq* x, double p, double* out);

/* ---- norms ------------------------------------------------------------ */

BM_API bm_status bm_dyadic_norm(const bm_seq* x, const bm_params* params, bm_norm_result* out);
BM_API bm_status bm_q_infty_norm(const bm_seq* x, const bm_params* params, bm_norm_result* out);
BM_API bm_status bm_centered_norm(const bm_seq* x, const bm_params* params, double tol, bm_norm_result* out);
BM_API bm_status bm_centered_power_partial(const bm_seq* x, const bm_params* params, int64_t max_radius,
                                           double* out);
BM_API bm_status bm_dyadic_length_norm(const bm_seq* x, const bm_params* params, double tol,
                                       int include_singletons, bm_norm_result* out);
BM_API bm_status bm_dyadic_tail_bound(const bm_seq* x, const bm_params* params, int level, double* out);
BM_API bm_status bm_c_pq_constant(const bm_params* params, double* out);
BM_API bm_status bm_embedding_constant_K(const bm_params* params, double* out);
BM_API bm_status bm_q_infty_constants(const bm_params* params, double* lower, double* upper);
BM_API bm_status bm_truncate_to_tolerance(const bm_seq* x, const bm_params* params, double eps, bm_seq** out);
BM_API bm_status bm_norm_result_to_json(const bm_norm_result* r, char** out);

/* Dyadic-family norm of entries pushed in strictly increasing index order,
 * computed exactly without storing them. */
BM_API bm_status bm_dyadic_stream_create(const bm_params* params, bm_dyadic_stream** out);
BM_API void bm_dyadic_stream_free(bm_dyadic_stream* s);
BM_API bm_status bm_dyadic_stream_push(bm_dyadic_stream* s, const int64_t* indices, const double* values, size_t n);
/* powers[i] = |value_i|^p. */
BM_API bm_status bm_dyadic_stream_push_powers(bm_dyadic_stream* s, const int64_t* indices, const double* powers,
                                              size_t n);
/* norm or power (r-th power of the norm) may be NULL. */
BM_API bm_status bm_dyadic_stream_value(const bm_dyadic_stream* s, double* norm, double* power);

/* ---- block space ------------------------------------------------------ */

BM_API bm_status bm_is_block(const bm_seq* y, int level, int64_t position, const bm_params* params, int* out);
BM_API bm_status bm_single_block_bound(const bm_seq* y, int level, int64_t position, const bm_params* params,
                                       double* out);
BM_API bm_status bm_extremal_block(const bm_seq* x, int level, int64_t position, const bm_params* params,
                                   bm_seq** out);
BM_API bm_status bm_default_block_max_level(const bm_seq* y, int* out);
BM_API bm_status bm_canonical_representation(const bm_seq* y, const bm_params* params, bm_block_rep** out);
/* max_level < 0 selects the default. rep may be NULL. */
BM_API bm_status bm_block_norm_upper(const bm_seq* y, const bm_params* params, int max_level, int iterations,
                                     double* value, bm_block_rep** rep);
BM_API void bm_block_rep_free(bm_block_rep* rep);
BM_API size_t bm_block_rep_size(const bm_block_rep* rep);
BM_API double bm_block_rep_coefficient_norm(const bm_block_rep* rep);
BM_API bm_status bm_block_rep_value(const bm_block_rep* rep, bm_seq** out);
BM_API bm_status bm_block_rep_to_json(const bm_block_rep* rep, char** out);

/* ---- duality ---------------------------------------------------------- */

BM_API bm_status bm_pairing(const bm_seq* x, const bm_seq* y, double* out);
BM_API bm_status bm_holder_chain_check(const bm_seq* x, const bm_block_rep* rep, const bm_params* params,
                                       bm_holder_report* out);
/* test_vector may be NULL. */
BM_API bm_status bm_norm_lower_certificate(const bm_seq* x, const bm_params* params, int max_level,
                                           double* value, bm_seq** test_vector);
/* Default candidate family (count, seed); test_vector may be NULL. */
BM_API bm_status bm_block_norm_lower_certificate(const bm_seq* y, const bm_params* params, int count,
                                                 uint64_t seed, double* value, bm_seq** test_vector);
/* Explicit candidates. */
BM_API bm_status bm_block_norm_lower_certificate_from(const bm_seq* y, const bm_params* params,
                                                      const bm_seq* const* candidates, size_t n, double* value);
/* alpha has room for n values. r = INFINITY allowed; r = 1 uses the max-index indicator. */
BM_API bm_status bm_lr_duality_extremal(const double* beta, size_t n, double r, double* alpha, double* value);

/* ---- operators -------------------------------------------------------- */

BM_API bm_status bm_translate(const bm_seq* x, int64_t t, bm_seq** out);
BM_API bm_status bm_convolve(const bm_seq* x, const bm_seq* y, bm_seq** out);
/* A = 2^{max(1/p,1/r)} with ||k*x|| <= A ||k||_1 ||x|| for the dyadic norm. */
BM_API bm_status bm_shift_constant(const bm_params* params, double* out);
BM_API bm_status bm_diag_multiply(const bm_seq* x, bm_map_fn a, void* context, bm_seq** out);
BM_API bm_status bm_project(const bm_seq* x, int64_t n, bm_seq** out);

BM_API bm_status bm_kernel_create(const bm_seq* k, double tail_l1_bound, bm_kernel** out);
BM_API bm_status bm_kernel_geometric(double lambda, double alpha, int64_t cutoff, bm_kernel** out);
BM_API bm_status bm_kernel_from_json(const char* text, bm_kernel** out);
BM_API bm_status bm_kernel_load(const char* path, bm_kernel** out);
BM_API void bm_kernel_free(bm_kernel* k);
BM_API bm_status bm_kernel_info(const bm_kernel* k, double* l1_norm, double* tail_l1_bound);
BM_API bm_status bm_kernel_seq(const bm_kernel* k, bm_seq** out);

/* values (may be NULL) receives 2*M doubles: re, im interleaved. */
BM_API bm_status bm_symbol(const bm_kernel* k, size_t resolution, double* min_gap, double* max_abs,
                           double* values);
BM_API bm_status bm_neumann_solve(const bm_kernel* k, const bm_seq* f, const bm_params* params, double tol,
                                  int max_terms, bm_seq** x, bm_solve_report* report);
/* resolution 0 doubles the grid from the default until the aliasing test
 * passes. inverse_kernel may be NULL. */
BM_API bm_status bm_wiener_solve(const bm_kernel* k, const bm_seq* f, const bm_params* params, size_t resolution,
                                 double tail_tol, bm_seq** x, bm_kernel** inverse_kernel,
                                 bm_solve_report* report);
/* nonlinearity: "zero", "sin:eps", "tanh:eps", "linear:c". */
BM_API bm_status bm_nonlinear_solve(const bm_kernel* k, const char* nonlinearity, const bm_seq* f,
                                    const bm_params* params, double tol, int max_iterations, bm_seq** x,
                                    bm_solve_report* report);
/* F must satisfy F(0) = 0 and be Lipschitz with the given constant. */
BM_API bm_status bm_nonlinear_solve_fn(const bm_kernel* k, bm_map_fn F, void* context, double lipschitz,
                                       const bm_seq* f, const bm_params* params, double tol, int max_iterations,
                                       bm_seq** x, bm_solve_report* report);

#ifdef __cplusplus
}
#endif

#endif /* BMSEQ_BMSEQ_H */
