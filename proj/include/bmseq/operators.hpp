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

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "bmseq/params.hpp"
#include "bmseq/sparse_seq.hpp"

namespace bmseq {

/// A finitely supported convolution kernel. tail_l1_bound is the caller's
/// bound on the l1 mass cut away from an infinite kernel; it is added to
/// every error bound.
struct Kernel {
    SparseSeq seq;
    double l1_norm = 0.0;
    double tail_l1_bound = 0.0;

    static Kernel make(SparseSeq seq, double tail_l1_bound = 0.0);

    /// l1_norm + tail_l1_bound
    double total_l1() const noexcept { return l1_norm + tail_l1_bound; }
};

/// k(n) = lambda (1-alpha) alpha^{|n|} for |n| <= cutoff, tail 2 lambda alpha^{cutoff+1}.
Kernel geometric_kernel(double lambda, double alpha, Index cutoff);

/// y(n) = x(n - t)
SparseSeq translate(const SparseSeq& x, Index t);

/// Exact finite convolution.
SparseSeq convolve(const SparseSeq& x, const SparseSeq& y);

/// A = 2^{max(1/p, 1/r)}: ||x(. - t)||_D <= A ||x||_D for every shift t, hence
/// ||k * x||_D <= A ||k||_1 ||x||_D. The dyadic norm is not shift invariant
/// (x = e_{-1} + e_0 at p=1, q=2, r=2 has norm 2, its unit shift sqrt 6), so
/// all solver bounds carry this factor.
double shift_constant(const Params& P);

/// (a_n x_n); throws if a is not finite on supp(x).
SparseSeq diag_multiply(const std::function<double(Index)>& a, const SparseSeq& x);

/// Restriction to |n| <= N.
SparseSeq project(const SparseSeq& x, Index N);

struct NeumannResult {
    SparseSeq solution;
    double error_bound = 0.0;        ///< a-priori bound, plus kernel tail effect
    double residual = 0.0;           ///< ||x - k*x - f||_D with the stored kernel
    int terms = 0;                   ///< N in sum_{m<=N} k^{*m} f
    std::vector<double> increments;  ///< ||x_{i+1} - x_i||_D
};

/// Partial Neumann sum for (I - T_k) x = f. Requires total_l1 < 1.
NeumannResult neumann_solve(const Kernel& k, const SparseSeq& f, const Params& P, double tol, int max_terms = 10000);

struct SymbolGrid {
    std::size_t resolution = 0;
    std::vector<std::complex<double>> values;  ///< k^(2 pi m / M)
    double min_gap = 1.0;                      ///< min |1 - k^|
    double max_abs = 0.0;                      ///< max |k^|, at most ||k||_1
};

/// Smallest admissible resolution for symbol(): 4 * support width.
std::size_t min_symbol_resolution(const Kernel& k);

SymbolGrid symbol(const Kernel& k, std::size_t M);

/// Below this the symbol is treated as touching 1.
inline constexpr double kMinSymbolGap = 1e-12;

struct InverseKernel {
    Kernel g;
    std::size_t resolution = 0;
    double min_gap = 0.0;
    double truncated_mass = 0.0;  ///< l1 mass of dropped coefficients
    double outer_mass = 0.0;      ///< l1 mass at |n| >= M/4 before truncation
};

/// g with (I - T_k)^{-1} = I + T_g from the M-point inverse DFT of
/// k^/(1-k^). Coefficients are dropped smallest first while the dropped
/// mass stays within tail_tol. Throws PreconditionFailed if the symbol
/// touches 1 and ToleranceUnmet if the mass at |n| >= M/4 exceeds tail_tol.
InverseKernel invert_kernel(const Kernel& k, std::size_t M, double tail_tol);

/// Doubles M from default_wiener_resolution until the aliasing test passes.
InverseKernel invert_kernel_auto(const Kernel& k, double tail_tol, std::size_t max_resolution = std::size_t{1} << 22);

/// Smallest power of two >= 16 * kernel width, at least 16.
std::size_t default_wiener_resolution(const Kernel& k);

struct WienerResult {
    SparseSeq solution;
    InverseKernel inverse;
    double residual = 0.0;
    double error_bound = 0.0;     ///< (1 + A (||g||_1 + dropped))(residual + A tail ||x||_D)
    double operator_bound = 0.0;  ///< 1 + A ||g||_1
};

/// x = f + g*f. M = 0 selects invert_kernel_auto.
WienerResult wiener_solve(const Kernel& k, const SparseSeq& f, const Params& P, std::size_t M, double tail_tol);

/// A pointwise map with F(0) = 0 and a Lipschitz constant.
struct Nonlinearity {
    std::string name;
    std::function<double(double)> map;
    double lipschitz = 0.0;
};

/// "zero", "sin:eps", "tanh:eps", "linear:c".
Nonlinearity parse_nonlinearity(std::string_view spec);

struct NonlinearResult {
    SparseSeq solution;
    int iterations = 0;
    double contraction = 0.0;
    double residual = 0.0;        ///< ||x - k*x - F(x) - f||_D
    double residual_bound = 0.0;  ///< tol (1+L)/(1-contraction)
    double error_bound = 0.0;     ///< contraction/(1-contraction) * last gap
    double min_gap = 0.0;
    double inverse_l1 = 0.0;
    std::vector<double> gaps;
};

/// Fixed point of x = (I - T_k)^{-1}(F(x) + f).
NonlinearResult nonlinear_solve(const Kernel& k, const Nonlinearity& F, const SparseSeq& f, const Params& P,
                                double tol, int max_iterations = 1000);

}  // namespace bmseq
