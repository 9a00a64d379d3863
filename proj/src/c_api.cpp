// Copyright 2026 The bmseq Authors
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

#include "bmseq/bmseq.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "bmseq/block_space.hpp"
#include "bmseq/duality.hpp"
#include "bmseq/error.hpp"
#include "bmseq/norms.hpp"
#include "bmseq/operators.hpp"
#include "json_io.hpp"

struct bm_seq {
    bmseq::SparseSeq seq;
};

struct bm_kernel {
    bmseq::Kernel kernel;
};

struct bm_block_rep {
    bmseq::BlockRepresentation rep;
};

struct bm_dyadic_stream {
    bmseq::DyadicStream stream;
};

namespace {

using namespace bmseq;

thread_local std::string g_last_error;
thread_local double g_last_quantity = std::numeric_limits<double>::quiet_NaN();

bm_status fail(bm_status s, const char* what, double quantity = std::numeric_limits<double>::quiet_NaN())
{
    g_last_error = what;
    g_last_quantity = quantity;
    return s;
}

template <class F>
bm_status guard(F&& body)
{
    try {
        body();
        g_last_error.clear();
        g_last_quantity = std::numeric_limits<double>::quiet_NaN();
        return BM_OK;
    } catch (const PreconditionFailed& e) {
        return fail(BM_ERR_PRECONDITION, e.what(), e.quantity());
    } catch (const ToleranceUnmet& e) {
        return fail(BM_ERR_TOLERANCE, e.what());
    } catch (const InvalidArgument& e) {
        return fail(BM_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(BM_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(BM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(BM_ERR_INTERNAL, "unknown error");
    }
}

template <class T>
const T& need(const T* p, const char* name)
{
    if (p == nullptr) throw InvalidArgument(std::string(name) + " is NULL");
    return *p;
}

template <class T>
T* need_out(T* p, const char* name)
{
    if (p == nullptr) throw InvalidArgument(std::string("output ") + name + " is NULL");
    return p;
}

const char* need_str(const char* s, const char* name)
{
    if (s == nullptr) throw InvalidArgument(std::string(name) + " is NULL");
    return s;
}

Params params_of(const bm_params* p)
{
    const auto& P = need(p, "params");
    return Params::make(P.p, P.q, P.r);
}

const SparseSeq& seq_of(const bm_seq* x, const char* name = "sequence")
{
    return need(x, name).seq;
}

bm_seq* wrap(SparseSeq s)
{
    return new bm_seq{std::move(s)};
}

char* dup_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

bm_norm_result to_c(const NormResult& r)
{
    return {r.value, r.remainder_bound, static_cast<bm_verdict>(r.verdict)};
}

DyadicInterval interval_of(int level, int64_t position)
{
    return DyadicInterval::make(level, position);
}

bm_solve_report empty_report()
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan, nan, nan, nan, nan, 0, 0};
}

}  // namespace

extern "C" {

const char* bm_version(void)
{
    return "0.1.0";
}

const char* bm_last_error(void)
{
    return g_last_error.c_str();
}

double bm_last_error_quantity(void)
{
    return g_last_quantity;
}

void bm_string_free(char* s)
{
    std::free(s);
}

bm_status bm_parse_exponent(const char* text, double* out)
{
    return guard([&] { *need_out(out, "value") = parse_exponent(need_str(text, "text")); });
}

bm_status bm_params_validate(const bm_params* params)
{
    return guard([&] { params_of(params); });
}

bm_status bm_params_derived(const bm_params* params, double* p_conj, double* q_conj, double* r_conj, double* beta)
{
    return guard([&] {
        const Params P = params_of(params);
        if (p_conj) *p_conj = P.p_conj();
        if (q_conj) *q_conj = P.q_conj();
        if (r_conj) *r_conj = P.r_conj();
        if (beta) *beta = P.beta();
    });
}

// ---- sequences -------------------------------------------------------------

bm_status bm_seq_create(const int64_t* indices, const double* values, size_t n, bm_seq** out)
{
    return guard([&] {
        need_out(out, "sequence");
        if (n > 0 && (indices == nullptr || values == nullptr)) throw InvalidArgument("entry arrays are NULL");
        std::vector<Entry> e(n);
        for (size_t i = 0; i < n; ++i) e[i] = {indices[i], values[i]};
        *out = wrap(SparseSeq::from_entries(std::move(e)));
    });
}

bm_status bm_seq_zero(bm_seq** out)
{
    return guard([&] { *need_out(out, "sequence") = wrap({}); });
}

bm_status bm_seq_unit(int64_t index, double value, bm_seq** out)
{
    return guard([&] { *need_out(out, "sequence") = wrap(SparseSeq::unit(index, value)); });
}

bm_status bm_seq_clone(const bm_seq* x, bm_seq** out)
{
    return guard([&] { *need_out(out, "sequence") = wrap(seq_of(x)); });
}

void bm_seq_free(bm_seq* x)
{
    delete x;
}

size_t bm_seq_size(const bm_seq* x)
{
    return x ? x->seq.size() : 0;
}

bm_status bm_seq_entries(const bm_seq* x, int64_t* indices, double* values, size_t capacity)
{
    return guard([&] {
        auto e = seq_of(x).entries();
        const size_t n = std::min(capacity, e.size());
        for (size_t i = 0; i < n; ++i) {
            if (indices) indices[i] = e[i].index;
            if (values) values[i] = e[i].value;
        }
    });
}

double bm_seq_get(const bm_seq* x, int64_t index)
{
    return x ? x->seq[index] : 0.0;
}

bm_status bm_seq_from_json(const char* text, bm_seq** out)
{
    return guard([&] { *need_out(out, "sequence") = wrap(json_io::seq_from_text(need_str(text, "text"))); });
}

bm_status bm_seq_load(const char* path, bm_seq** out)
{
    return guard([&] { *need_out(out, "sequence") = wrap(json_io::load_seq(need_str(path, "path"))); });
}

bm_status bm_seq_to_json(const bm_seq* x, char** out)
{
    return guard([&] { *need_out(out, "string") = dup_string(json_io::to_json(seq_of(x)).dump()); });
}

bm_status bm_seq_save(const bm_seq* x, const char* path)
{
    return guard([&] { json_io::save_text(need_str(path, "path"), json_io::to_json(seq_of(x)).dump(2) + "\n"); });
}

bm_status bm_seq_add(const bm_seq* x, const bm_seq* y, bm_seq** out)
{
    return guard([&] { *need_out(out, "sequence") = wrap(seq_of(x) + seq_of(y)); });
}

bm_status bm_seq_sub(const bm_seq* x, const bm_seq* y, bm_seq** out)
{
    return guard([&] { *need_out(out, "sequence") = wrap(seq_of(x) - seq_of(y)); });
}

bm_status bm_seq_scale(const bm_seq* x, double factor, bm_seq** out)
{
    return guard([&] { *need_out(out, "sequence") = wrap(seq_of(x).scaled(factor)); });
}

bm_status bm_lp_norm(const bm_seq* x, double p, double* out)
{
    return guard([&] { *need_out(out, "value") = lp_norm(seq_of(x), p); });
}

// ---- norms -----------------------------------------------------------------

bm_status bm_dyadic_norm(const bm_seq* x, const bm_params* params, bm_norm_result* out)
{
    return guard([&] { *need_out(out, "result") = to_c(dyadic_norm(seq_of(x), params_of(params))); });
}

bm_status bm_q_infty_norm(const bm_seq* x, const bm_params* params, bm_norm_result* out)
{
    return guard([&] { *need_out(out, "result") = to_c(q_infty_norm(seq_of(x), params_of(params))); });
}

bm_status bm_centered_norm(const bm_seq* x, const bm_params* params, double tol, bm_norm_result* out)
{
    return guard([&] { *need_out(out, "result") = to_c(centered_norm(seq_of(x), params_of(params), tol)); });
}

bm_status bm_centered_power_partial(const bm_seq* x, const bm_params* params, int64_t max_radius, double* out)
{
    return guard([&] { *need_out(out, "value") = centered_power_partial(seq_of(x), params_of(params), max_radius); });
}

bm_status bm_dyadic_length_norm(const bm_seq* x, const bm_params* params, double tol, int include_singletons,
                                bm_norm_result* out)
{
    return guard([&] {
        *need_out(out, "result") =
            to_c(dyadic_length_norm(seq_of(x), params_of(params), tol, include_singletons != 0));
    });
}

bm_status bm_dyadic_tail_bound(const bm_seq* x, const bm_params* params, int level, double* out)
{
    return guard([&] { *need_out(out, "value") = dyadic_tail_bound(seq_of(x), params_of(params), level); });
}

bm_status bm_c_pq_constant(const bm_params* params, double* out)
{
    return guard([&] { *need_out(out, "value") = c_pq_constant(params_of(params)); });
}

bm_status bm_embedding_constant_K(const bm_params* params, double* out)
{
    return guard([&] { *need_out(out, "value") = embedding_constant_K(params_of(params)); });
}

bm_status bm_q_infty_constants(const bm_params* params, double* lower, double* upper)
{
    return guard([&] {
        const auto c = q_infty_constants(params_of(params));
        *need_out(lower, "lower") = c.lower;
        *need_out(upper, "upper") = c.upper;
    });
}

bm_status bm_truncate_to_tolerance(const bm_seq* x, const bm_params* params, double eps, bm_seq** out)
{
    return guard([&] { *need_out(out, "sequence") = wrap(truncate_to_tolerance(seq_of(x), params_of(params), eps)); });
}

bm_status bm_dyadic_stream_create(const bm_params* params, bm_dyadic_stream** out)
{
    return guard([&] { *need_out(out, "stream") = new bm_dyadic_stream{DyadicStream(params_of(params))}; });
}

void bm_dyadic_stream_free(bm_dyadic_stream* s)
{
    delete s;
}

bm_status bm_dyadic_stream_push(bm_dyadic_stream* s, const int64_t* indices, const double* values, size_t n)
{
    return guard([&] {
        if (!s) throw InvalidArgument("null stream");
        auto& st = s->stream;
        if (n > 0 && (!indices || !values)) throw InvalidArgument("null entry arrays");
        for (size_t i = 0; i < n; ++i) st.push(indices[i], values[i]);
    });
}

bm_status bm_dyadic_stream_push_powers(bm_dyadic_stream* s, const int64_t* indices, const double* powers, size_t n)
{
    return guard([&] {
        if (!s) throw InvalidArgument("null stream");
        auto& st = s->stream;
        if (n > 0 && (!indices || !powers)) throw InvalidArgument("null entry arrays");
        for (size_t i = 0; i < n; ++i) st.push_power(indices[i], powers[i]);
    });
}

bm_status bm_dyadic_stream_value(const bm_dyadic_stream* s, double* norm, double* power)
{
    return guard([&] {
        const auto& st = need(s, "stream").stream;
        const double pw = st.power();
        if (norm) *norm = st.norm();
        if (power) *power = pw;
    });
}

bm_status bm_norm_result_to_json(const bm_norm_result* r, char** out)
{
    return guard([&] {
        const auto& c = need(r, "result");
        NormResult n{c.value, c.remainder_bound, static_cast<Verdict>(c.verdict)};
        *need_out(out, "string") = dup_string(json_io::to_json(n).dump());
    });
}

// ---- block space -----------------------------------------------------------

bm_status bm_is_block(const bm_seq* y, int level, int64_t position, const bm_params* params, int* out)
{
    return guard([&] { *need_out(out, "flag") = is_block(seq_of(y), interval_of(level, position), params_of(params)); });
}

bm_status bm_single_block_bound(const bm_seq* y, int level, int64_t position, const bm_params* params, double* out)
{
    return guard([&] {
        *need_out(out, "value") = single_block_bound(seq_of(y), interval_of(level, position), params_of(params));
    });
}

bm_status bm_extremal_block(const bm_seq* x, int level, int64_t position, const bm_params* params, bm_seq** out)
{
    return guard([&] {
        *need_out(out, "sequence") =
            wrap(extremal_block(seq_of(x), interval_of(level, position), params_of(params)).values());
    });
}

bm_status bm_default_block_max_level(const bm_seq* y, int* out)
{
    return guard([&] { *need_out(out, "level") = default_block_max_level(seq_of(y)); });
}

bm_status bm_canonical_representation(const bm_seq* y, const bm_params* params, bm_block_rep** out)
{
    return guard([&] {
        *need_out(out, "representation") = new bm_block_rep{canonical_representation(seq_of(y), params_of(params))};
    });
}

bm_status bm_block_norm_upper(const bm_seq* y, const bm_params* params, int max_level, int iterations, double* value,
                              bm_block_rep** rep)
{
    return guard([&] {
        const auto& s = seq_of(y);
        const int L = max_level < 0 ? default_block_max_level(s) : max_level;
        auto res = block_norm_upper(s, params_of(params), L, iterations);
        *need_out(value, "value") = res.value;
        if (rep) *rep = new bm_block_rep{std::move(res.representation)};
    });
}

void bm_block_rep_free(bm_block_rep* rep)
{
    delete rep;
}

size_t bm_block_rep_size(const bm_block_rep* rep)
{
    return rep ? rep->rep.terms().size() : 0;
}

double bm_block_rep_coefficient_norm(const bm_block_rep* rep)
{
    return rep ? rep->rep.coefficient_norm() : 0.0;
}

bm_status bm_block_rep_value(const bm_block_rep* rep, bm_seq** out)
{
    return guard([&] { *need_out(out, "sequence") = wrap(need(rep, "representation").rep.value()); });
}

bm_status bm_block_rep_to_json(const bm_block_rep* rep, char** out)
{
    return guard([&] { *need_out(out, "string") = dup_string(json_io::to_json(need(rep, "representation").rep).dump()); });
}

// ---- duality ---------------------------------------------------------------

bm_status bm_pairing(const bm_seq* x, const bm_seq* y, double* out)
{
    return guard([&] { *need_out(out, "value") = pairing(seq_of(x), seq_of(y)); });
}

bm_status bm_holder_chain_check(const bm_seq* x, const bm_block_rep* rep, const bm_params* params,
                                bm_holder_report* out)
{
    return guard([&] {
        const auto r = holder_chain_check(seq_of(x), need(rep, "representation").rep, params_of(params));
        *need_out(out, "report") = {r.pairing, r.local_holder, r.block_scaled, r.coefficient_times_norm,
                                    {r.slacks[0], r.slacks[1], r.slacks[2]}};
    });
}

bm_status bm_norm_lower_certificate(const bm_seq* x, const bm_params* params, int max_level, double* value,
                                    bm_seq** test_vector)
{
    return guard([&] {
        auto c = bm_norm_lower_certificate(seq_of(x), params_of(params), max_level);
        *need_out(value, "value") = c.certified_value;
        if (test_vector) *test_vector = wrap(std::move(c.test_vector));
    });
}

bm_status bm_block_norm_lower_certificate(const bm_seq* y, const bm_params* params, int count, uint64_t seed,
                                          double* value, bm_seq** test_vector)
{
    return guard([&] {
        const Params P = params_of(params);
        const auto& s = seq_of(y);
        auto c = block_norm_lower_certificate(s, P, default_block_candidates(s, P, count, seed));
        *need_out(value, "value") = c.certified_value;
        if (test_vector) *test_vector = wrap(std::move(c.test_vector));
    });
}

bm_status bm_block_norm_lower_certificate_from(const bm_seq* y, const bm_params* params,
                                               const bm_seq* const* candidates, size_t n, double* value)
{
    return guard([&] {
        if (n > 0 && candidates == nullptr) throw InvalidArgument("candidates is NULL");
        std::vector<SparseSeq> c;
        for (size_t i = 0; i < n; ++i) c.push_back(seq_of(candidates[i], "candidate"));
        *need_out(value, "value") = block_norm_lower_certificate(seq_of(y), params_of(params), c).certified_value;
    });
}

bm_status bm_lr_duality_extremal(const double* beta, size_t n, double r, double* alpha, double* value)
{
    return guard([&] {
        if (n > 0 && (beta == nullptr || alpha == nullptr)) throw InvalidArgument("arrays are NULL");
        std::vector<double> b(beta, beta + n);
        const LrExtremal e = r == 1.0 ? l1_duality_extremal(b) : lr_duality_extremal(b, r);
        std::copy(e.alpha.begin(), e.alpha.end(), alpha);
        *need_out(value, "value") = e.value;
    });
}

// ---- operators -------------------------------------------------------------

bm_status bm_translate(const bm_seq* x, int64_t t, bm_seq** out)
{
    return guard([&] { *need_out(out, "sequence") = wrap(translate(seq_of(x), t)); });
}

bm_status bm_convolve(const bm_seq* x, const bm_seq* y, bm_seq** out)
{
    return guard([&] { *need_out(out, "sequence") = wrap(convolve(seq_of(x), seq_of(y))); });
}

bm_status bm_shift_constant(const bm_params* params, double* out)
{
    return guard([&] { *need_out(out, "value") = shift_constant(params_of(params)); });
}

bm_status bm_diag_multiply(const bm_seq* x, bm_map_fn a, void* context, bm_seq** out)
{
    return guard([&] {
        if (a == nullptr) throw InvalidArgument("multiplier is NULL");
        auto fn = [&](Index n) { return a(static_cast<double>(n), context); };
        *need_out(out, "sequence") = wrap(diag_multiply(fn, seq_of(x)));
    });
}

bm_status bm_project(const bm_seq* x, int64_t n, bm_seq** out)
{
    return guard([&] { *need_out(out, "sequence") = wrap(project(seq_of(x), n)); });
}

bm_status bm_kernel_create(const bm_seq* k, double tail_l1_bound, bm_kernel** out)
{
    return guard([&] { *need_out(out, "kernel") = new bm_kernel{Kernel::make(seq_of(k), tail_l1_bound)}; });
}

bm_status bm_kernel_geometric(double lambda, double alpha, int64_t cutoff, bm_kernel** out)
{
    return guard([&] { *need_out(out, "kernel") = new bm_kernel{geometric_kernel(lambda, alpha, cutoff)}; });
}

bm_status bm_kernel_from_json(const char* text, bm_kernel** out)
{
    return guard([&] { *need_out(out, "kernel") = new bm_kernel{json_io::kernel_from_text(need_str(text, "text"))}; });
}

bm_status bm_kernel_load(const char* path, bm_kernel** out)
{
    return guard([&] { *need_out(out, "kernel") = new bm_kernel{json_io::load_kernel(need_str(path, "path"))}; });
}

void bm_kernel_free(bm_kernel* k)
{
    delete k;
}

bm_status bm_kernel_info(const bm_kernel* k, double* l1_norm, double* tail_l1_bound)
{
    return guard([&] {
        const auto& K = need(k, "kernel").kernel;
        if (l1_norm) *l1_norm = K.l1_norm;
        if (tail_l1_bound) *tail_l1_bound = K.tail_l1_bound;
    });
}

bm_status bm_kernel_seq(const bm_kernel* k, bm_seq** out)
{
    return guard([&] { *need_out(out, "sequence") = wrap(need(k, "kernel").kernel.seq); });
}

bm_status bm_symbol(const bm_kernel* k, size_t resolution, double* min_gap, double* max_abs, double* values)
{
    return guard([&] {
        const auto s = symbol(need(k, "kernel").kernel, resolution);
        if (min_gap) *min_gap = s.min_gap;
        if (max_abs) *max_abs = s.max_abs;
        if (values) {
            for (size_t m = 0; m < s.values.size(); ++m) {
                values[2 * m] = s.values[m].real();
                values[2 * m + 1] = s.values[m].imag();
            }
        }
    });
}

bm_status bm_neumann_solve(const bm_kernel* k, const bm_seq* f, const bm_params* params, double tol, int max_terms,
                           bm_seq** x, bm_solve_report* report)
{
    return guard([&] {
        const auto& K = need(k, "kernel").kernel;
        auto r = neumann_solve(K, seq_of(f, "rhs"), params_of(params), tol, max_terms);
        if (report) {
            *report = empty_report();
            report->error_bound = r.error_bound;
            report->residual = r.residual;
            const double kappa = K.total_l1();
            report->operator_bound = 1.0 + shift_constant(params_of(params)) * kappa / (1.0 - kappa);
            report->iterations = r.terms;
        }
        *need_out(x, "solution") = wrap(std::move(r.solution));
    });
}

bm_status bm_wiener_solve(const bm_kernel* k, const bm_seq* f, const bm_params* params, size_t resolution,
                          double tail_tol, bm_seq** x, bm_kernel** inverse_kernel, bm_solve_report* report)
{
    return guard([&] {
        auto r = wiener_solve(need(k, "kernel").kernel, seq_of(f, "rhs"), params_of(params), resolution, tail_tol);
        if (report) {
            *report = empty_report();
            report->error_bound = r.error_bound;
            report->residual = r.residual;
            report->symbol_min_gap = r.inverse.min_gap;
            report->operator_bound = r.operator_bound;
            report->truncated_mass = r.inverse.truncated_mass;
            report->iterations = 1;
            report->resolution = r.inverse.resolution;
        }
        *need_out(x, "solution") = wrap(std::move(r.solution));
        if (inverse_kernel) *inverse_kernel = new bm_kernel{std::move(r.inverse.g)};
    });
}

namespace {

bm_status run_nonlinear(const bm_kernel* k, const Nonlinearity& F, const bm_seq* f, const bm_params* params,
                        double tol, int max_iterations, bm_seq** x, bm_solve_report* report)
{
    return guard([&] {
        auto r = nonlinear_solve(need(k, "kernel").kernel, F, seq_of(f, "rhs"), params_of(params), tol, max_iterations);
        if (report) {
            *report = empty_report();
            report->error_bound = r.error_bound;
            report->residual = r.residual;
            report->symbol_min_gap = r.min_gap;
            report->operator_bound = 1.0 + shift_constant(params_of(params)) * r.inverse_l1;
            report->contraction = r.contraction;
            report->residual_bound = r.residual_bound;
            report->iterations = r.iterations;
        }
        *need_out(x, "solution") = wrap(std::move(r.solution));
    });
}

}  // namespace

bm_status bm_nonlinear_solve(const bm_kernel* k, const char* nonlinearity, const bm_seq* f, const bm_params* params,
                             double tol, int max_iterations, bm_seq** x, bm_solve_report* report)
{
    Nonlinearity F;
    const bm_status s = guard([&] { F = parse_nonlinearity(need_str(nonlinearity, "nonlinearity")); });
    if (s != BM_OK) return s;
    return run_nonlinear(k, F, f, params, tol, max_iterations, x, report);
}

bm_status bm_nonlinear_solve_fn(const bm_kernel* k, bm_map_fn F, void* context, double lipschitz, const bm_seq* f,
                                const bm_params* params, double tol, int max_iterations, bm_seq** x,
                                bm_solve_report* report)
{
    if (F == nullptr) return fail(BM_ERR_INVALID_ARGUMENT, "map is NULL");
    Nonlinearity N{"callback", [F, context](double v) { return F(v, context); }, lipschitz};
    return run_nonlinear(k, N, f, params, tol, max_iterations, x, report);
}

}  // extern "C"
