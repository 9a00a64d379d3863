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

#include "bmseq/operators.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "bmseq/error.hpp"
#include "bmseq/norms.hpp"

namespace bmseq {

Kernel Kernel::make(SparseSeq seq, double tail_l1_bound)
{
    if (!(tail_l1_bound >= 0.0) || !std::isfinite(tail_l1_bound)) {
        throw InvalidArgument("kernel tail bound must be finite and nonnegative");
    }
    Kernel k;
    k.l1_norm = lp_norm(seq, 1.0);
    k.seq = std::move(seq);
    k.tail_l1_bound = tail_l1_bound;
    return k;
}

Kernel geometric_kernel(double lambda, double alpha, Index cutoff)
{
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("geometric kernel needs 0 < alpha < 1");
    if (!std::isfinite(lambda)) throw InvalidArgument("geometric kernel needs a finite lambda");
    if (cutoff < 0) throw InvalidArgument("cutoff must be nonnegative");
    std::vector<Entry> e;
    for (Index n = -cutoff; n <= cutoff; ++n) {
        e.push_back({n, lambda * (1.0 - alpha) * std::pow(alpha, static_cast<double>(std::abs(n)))});
    }
    const double tail = 2.0 * std::fabs(lambda) * std::pow(alpha, static_cast<double>(cutoff + 1));
    return Kernel::make(SparseSeq::from_sorted(std::move(e)), tail);
}

SparseSeq translate(const SparseSeq& x, Index t)
{
    std::vector<Entry> e;
    e.reserve(x.size());
    for (const auto& v : x.entries()) e.push_back({v.index + t, v.value});
    return SparseSeq::from_sorted(std::move(e));
}

SparseSeq convolve(const SparseSeq& x, const SparseSeq& y)
{
    if (x.empty() || y.empty()) return {};
    const Index lo = x.support_min() + y.support_min();
    const Index hi = x.support_max() + y.support_max();
    std::vector<Entry> out;
    if (hi - lo < (Index{1} << 24)) {
        std::vector<double> dense(static_cast<std::size_t>(hi - lo + 1), 0.0);
        for (const auto& a : x.entries()) {
            for (const auto& b : y.entries()) dense[static_cast<std::size_t>(a.index + b.index - lo)] += a.value * b.value;
        }
        for (std::size_t i = 0; i < dense.size(); ++i) {
            if (dense[i] != 0.0) out.push_back({lo + static_cast<Index>(i), dense[i]});
        }
    } else {
        std::map<Index, double> acc;
        for (const auto& a : x.entries()) {
            for (const auto& b : y.entries()) acc[a.index + b.index] += a.value * b.value;
        }
        for (const auto& [n, v] : acc) {
            if (v != 0.0) out.push_back({n, v});
        }
    }
    return SparseSeq::from_sorted(std::move(out));
}

double shift_constant(const Params& P)
{
    // A shifted level-j cell meets at most two level-j cells and each cell
    // meets at most two shifted ones; (a+b)^{r/p} <= 2^{max(r/p-1,0)}(a^{r/p}+b^{r/p}).
    return std::exp2(std::max(1.0 / P.p(), 1.0 / P.r()));
}

SparseSeq diag_multiply(const std::function<double(Index)>& a, const SparseSeq& x)
{
    std::vector<Entry> e;
    e.reserve(x.size());
    for (const auto& v : x.entries()) {
        const double m = a(v.index);
        if (!std::isfinite(m)) throw InvalidArgument("multiplier is not finite at " + std::to_string(v.index));
        e.push_back({v.index, m * v.value});
    }
    return SparseSeq::from_sorted(std::move(e));
}

SparseSeq project(const SparseSeq& x, Index N)
{
    if (N < 0) throw InvalidArgument("project: N must be nonnegative");
    return x.restricted(-N, N);
}

// ---------------------------------------------------------------------------

NeumannResult neumann_solve(const Kernel& k, const SparseSeq& f, const Params& P, double tol, int max_terms)
{
    if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
    const double kappa = k.total_l1();
    if (!(kappa < 1.0)) {
        throw PreconditionFailed("Neumann series needs ||k||_1 < 1 (use the Wiener solver)", kappa);
    }
    const double A = shift_constant(P);
    const double fnorm = A * dyadic_family_norm(f, P);
    int N = 0;
    if (kappa > 0.0 && fnorm > 0.0) {
        // smallest N with A kappa^{N+1} / (1 - kappa) * ||f|| < tol
        const double need = std::log(tol * (1.0 - kappa) / fnorm) / std::log(kappa) - 1.0;
        N = std::max(0, static_cast<int>(std::floor(need)));
        while (std::pow(kappa, N + 1) / (1.0 - kappa) * fnorm >= tol) ++N;
        while (N > 0 && std::pow(kappa, N) / (1.0 - kappa) * fnorm < tol) --N;
    }
    if (N > max_terms) {
        throw ToleranceUnmet("Neumann series needs " + std::to_string(N) + " terms, above max_terms");
    }

    NeumannResult res;
    res.terms = N;
    SparseSeq x = f;
    for (int i = 0; i < N; ++i) {
        SparseSeq next = f + convolve(k.seq, x);
        res.increments.push_back(dyadic_family_norm(next - x, P));
        x = std::move(next);
    }
    const double a_priori = std::pow(kappa, N + 1) / (1.0 - kappa) * fnorm;
    res.residual = dyadic_family_norm(x - convolve(k.seq, x) - f, P);
    if (res.residual > 2.0 * tol) {
        throw ToleranceUnmet("Neumann residual " + std::to_string(res.residual) + " exceeds 2 tol");
    }
    const double xnorm = dyadic_family_norm(x, P);
    // (I - T_k)^{-1} has norm <= A / (1 - kappa) and T_tail adds another A.
    res.error_bound = a_priori + A * A * k.tail_l1_bound * (xnorm + a_priori) / (1.0 - kappa);
    res.solution = std::move(x);
    return res;
}

// ---------------------------------------------------------------------------

namespace {

Index kernel_width(const Kernel& k)
{
    return k.seq.empty() ? 0 : k.seq.support_max() - k.seq.support_min() + 1;
}

std::size_t wrap(Index n, std::size_t M)
{
    const auto m = static_cast<Index>(M);
    return static_cast<std::size_t>(((n % m) + m) % m);
}

// In-place 1-D complex DFT; sign FFTW_FORWARD gives sum x_j e^{-2 pi i jk/M}.
void dft(std::vector<std::complex<double>>& data, int sign)
{
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

}  // namespace

std::size_t min_symbol_resolution(const Kernel& k)
{
    return std::max<std::size_t>(1, 4 * static_cast<std::size_t>(kernel_width(k)));
}

SymbolGrid symbol(const Kernel& k, std::size_t M)
{
    if (M < min_symbol_resolution(k) || M > (std::size_t{1} << 28)) {
        throw InvalidArgument("symbol resolution " + std::to_string(M) + " below 4 x kernel width");
    }
    SymbolGrid s;
    s.resolution = M;
    s.values.assign(M, {0.0, 0.0});
    // The trigonometric sum only sees n mod M, so folding is exact.
    for (const auto& e : k.seq.entries()) s.values[wrap(e.index, M)] += e.value;
    dft(s.values, FFTW_FORWARD);
    s.min_gap = kInf;
    for (const auto& v : s.values) {
        s.min_gap = std::min(s.min_gap, std::abs(1.0 - v));
        s.max_abs = std::max(s.max_abs, std::abs(v));
    }
    return s;
}

std::size_t default_wiener_resolution(const Kernel& k)
{
    std::size_t M = 16;
    while (M < 16 * static_cast<std::size_t>(kernel_width(k))) M <<= 1;
    return M;
}

InverseKernel invert_kernel(const Kernel& k, std::size_t M, double tail_tol)
{
    if (!(tail_tol > 0.0)) throw InvalidArgument("tail_tol must be positive");
    if (M < 4 || (M & (M - 1)) != 0) throw InvalidArgument("resolution must be a power of two >= 4");
    SymbolGrid s = symbol(k, M);
    if (s.min_gap < kMinSymbolGap) {
        throw PreconditionFailed("symbol touches 1 on the grid; I - T_k is not invertible", s.min_gap);
    }
    auto& ghat = s.values;
    for (auto& v : ghat) v = v / (1.0 - v);
    dft(ghat, FFTW_BACKWARD);

    InverseKernel inv;
    inv.resolution = M;
    inv.min_gap = s.min_gap;
    const auto half = static_cast<Index>(M / 2);
    std::vector<Entry> coeffs;
    for (std::size_t j = 0; j < M; ++j) {
        const Index n = static_cast<Index>(j) < half ? static_cast<Index>(j) : static_cast<Index>(j) - static_cast<Index>(M);
        const double v = ghat[j].real() / static_cast<double>(M);
        if (v == 0.0) continue;
        if (std::abs(n) >= half / 2) inv.outer_mass += std::fabs(v);
        coeffs.push_back({n, v});
    }
    if (inv.outer_mass > tail_tol) {
        throw ToleranceUnmet("inverse kernel mass " + std::to_string(inv.outer_mass) +
                             " at |n| >= M/4 exceeds tail_tol; grid too coarse");
    }
    std::vector<std::size_t> order(coeffs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(coeffs[a].value) < std::fabs(coeffs[b].value);
    });
    std::vector<bool> keep(coeffs.size(), true);
    for (std::size_t i : order) {
        const double m = std::fabs(coeffs[i].value);
        if (inv.truncated_mass + m > tail_tol) break;
        inv.truncated_mass += m;
        keep[i] = false;
    }
    std::vector<Entry> kept;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (keep[i]) kept.push_back(coeffs[i]);
    }
    inv.g = Kernel::make(SparseSeq::from_entries(std::move(kept)), inv.truncated_mass);
    return inv;
}

InverseKernel invert_kernel_auto(const Kernel& k, double tail_tol, std::size_t max_resolution)
{
    for (std::size_t M = default_wiener_resolution(k);; M <<= 1) {
        try {
            return invert_kernel(k, M, tail_tol);
        } catch (const ToleranceUnmet&) {
            if (M >= max_resolution) throw;
        }
    }
}

WienerResult wiener_solve(const Kernel& k, const SparseSeq& f, const Params& P, std::size_t M, double tail_tol)
{
    WienerResult res;
    res.inverse = M == 0 ? invert_kernel_auto(k, tail_tol) : invert_kernel(k, M, tail_tol);
    const Kernel& g = res.inverse.g;
    res.solution = f + convolve(g.seq, f);
    res.residual = dyadic_family_norm(res.solution - convolve(k.seq, res.solution) - f, P);
    const double A = shift_constant(P);
    res.operator_bound = 1.0 + A * g.l1_norm;
    const double xnorm = dyadic_family_norm(res.solution, P);
    res.error_bound = (1.0 + A * g.total_l1()) * (res.residual + A * k.tail_l1_bound * xnorm);
    return res;
}

// ---------------------------------------------------------------------------

Nonlinearity parse_nonlinearity(std::string_view spec)
{
    const std::string s(spec);
    if (s == "zero") return {"zero", [](double) { return 0.0; }, 0.0};
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw InvalidArgument("unknown nonlinearity '" + s + "'");
    const std::string kind = s.substr(0, colon);
    double c = 0.0;
    try {
        std::size_t used = 0;
        c = std::stod(s.substr(colon + 1), &used);
        if (used != s.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw InvalidArgument("bad coefficient in nonlinearity '" + s + "'");
    }
    if (!std::isfinite(c)) throw InvalidArgument("non-finite coefficient in '" + s + "'");
    if (kind == "sin") return {s, [c](double v) { return c * std::sin(v); }, std::fabs(c)};
    if (kind == "tanh") return {s, [c](double v) { return c * std::tanh(v); }, std::fabs(c)};
    if (kind == "linear") return {s, [c](double v) { return c * v; }, std::fabs(c)};
    throw InvalidArgument("unknown nonlinearity '" + s + "'");
}

NonlinearResult nonlinear_solve(const Kernel& k, const Nonlinearity& F, const SparseSeq& f, const Params& P,
                                double tol, int max_iterations)
{
    if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
    if (!F.map) throw InvalidArgument("nonlinearity has no map");
    if (F.map(0.0) != 0.0) throw InvalidArgument("nonlinearity must fix 0");
    const double L = F.lipschitz;
    if (!(L >= 0.0)) throw InvalidArgument("Lipschitz constant must be nonnegative");

    const double kappa = k.total_l1();
    InverseKernel inv;
    try {
        inv = invert_kernel_auto(k, std::min(1e-12, 1e-2 * tol));
    } catch (const PreconditionFailed& e) {
        throw PreconditionFailed(std::string("nonlinear solve: ") + e.what(), e.quantity());
    }
    NonlinearResult res;
    res.min_gap = inv.min_gap;
    res.inverse_l1 = inv.g.total_l1();
    const double A = shift_constant(P);
    double c = L * (1.0 + A * res.inverse_l1);
    if (kappa < 1.0) c = std::min(c, L * (1.0 + A * kappa / (1.0 - kappa)));
    res.contraction = c;
    if (!(c < 1.0)) throw PreconditionFailed("nonlinear solve: map is not a contraction", c);

    auto solve_linear = [&](const SparseSeq& rhs) { return rhs + convolve(inv.g.seq, rhs); };
    auto apply_F = [&](const SparseSeq& x) {
        std::vector<Entry> e;
        e.reserve(x.size());
        for (const auto& v : x.entries()) e.push_back({v.index, F.map(v.value)});
        return SparseSeq::from_sorted(std::move(e));
    };

    SparseSeq x = solve_linear(f);
    for (int it = 1;; ++it) {
        SparseSeq next = solve_linear(apply_F(x) + f);
        const double gap = dyadic_family_norm(next - x, P);
        res.gaps.push_back(gap);
        x = std::move(next);
        res.iterations = it;
        if (gap < tol) break;
        if (res.gaps.size() >= 2 && !(gap < res.gaps[res.gaps.size() - 2])) {
            throw PreconditionFailed("nonlinear solve: iteration gaps stopped decreasing", gap);
        }
        if (it >= max_iterations) throw ToleranceUnmet("nonlinear solve: iteration budget exhausted");
    }
    res.residual = dyadic_family_norm(x - convolve(k.seq, x) - apply_F(x) - f, P);
    res.residual_bound = tol * (1.0 + L) / (1.0 - c);
    res.error_bound = c / (1.0 - c) * res.gaps.back();
    if (res.residual > res.residual_bound) {
        throw ToleranceUnmet("nonlinear solve: residual " + std::to_string(res.residual) + " above bound");
    }
    res.solution = std::move(x);
    return res;
}

}  // namespace bmseq
