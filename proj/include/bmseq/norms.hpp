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

#include <array>
#include <string_view>
#include <vector>

#include "bmseq/params.hpp"
#include "bmseq/sparse_seq.hpp"

namespace bmseq {

enum class Verdict { exact, truncated, divergent };

std::string_view to_string(Verdict v) noexcept;

/// A norm value with a certificate on what was left out.
///
/// For `truncated`, the true r-th power lies in
/// [value^r, value^r + remainder_bound]. For `divergent` the value is a
/// partial sum, not a norm, and remainder_bound is +inf.
struct NormResult {
    double value = 0.0;
    double remainder_bound = 0.0;
    Verdict verdict = Verdict::exact;
};

/// Radius caps for the truncated evaluators.
struct SeriesLimits {
    Index max_radius = 10'000'000;      ///< centered family
    int max_dyadic_length_level = 100'000;  ///< dyadic-length family, radius 2^N
    Index divergent_partial_radius = 1024;  ///< radii summed beyond D for divergent inputs
};

/// Dyadic-interval norm, evaluated exactly: levels below the frozen level are
/// enumerated and the remaining geometric tail is summed in closed form.
/// Requires q < inf.
NormResult dyadic_norm(const SparseSeq& x, const Params& P);

/// The r-th power of the dyadic norm restricted to levels 0..max_level
/// (no tail). Works for q = inf as well.
double dyadic_power_through(const SparseSeq& x, const Params& P, int max_level);

/// Per-level contributions sum_k |I(j,k)|^beta ||x||_{p,I(j,k)}^r for
/// j = 0..max_level.
std::vector<double> dyadic_level_sums(const SparseSeq& x, const Params& P, int max_level);

/// Certified bound on sum_{j > level} of the level contributions, valid for
/// every level (also below the frozen level).
double dyadic_tail_bound(const SparseSeq& x, const Params& P, int level);

/// Gradient of the dyadic norm with respect to the stored entries of x
/// (same ordering as x.entries()). x must be nonzero.
std::vector<double> dyadic_norm_gradient(const SparseSeq& x, const Params& P);

/// Centered-interval norm. Verdict is `divergent` iff r (1/p - 1/q) <= 2 and
/// x != 0; otherwise terms are summed until the certified remainder of the
/// r-th power drops below tol (or the radius cap is hit, in which case the
/// reported remainder exceeds tol).
NormResult centered_norm(const SparseSeq& x, const Params& P, double tol,
                         const SeriesLimits& limits = {});

/// Raw partial sum of the centered-family r-th power over radii 0..max_radius.
double centered_power_partial(const SparseSeq& x, const Params& P, Index max_radius);

/// Dyadic-length norm over the radii 2^N. Divergent iff beta >= -1 and
/// x != 0. With include_singletons the one-point sets {m} are added.
NormResult dyadic_length_norm(const SparseSeq& x, const Params& P, double tol,
                              bool include_singletons, const SeriesLimits& limits = {});

/// (1 / (1 - 2^{p/q - 1}))^{1/p}; the factor in ||x||_D = C ||x||_p when r = p.
double c_pq_constant(const Params& P);

/// K = ||e^0||_D, the constant of ||y||_D <= K ||y||_1.
double embedding_constant_K(const Params& P);

/// dyadic_norm for q < inf, q_infty_norm for q = inf; the value only.
double dyadic_family_norm(const SparseSeq& x, const Params& P);

/// Dyadic norm with q = inf (weight 2^{-j r/p}), evaluated exactly.
NormResult q_infty_norm(const SparseSeq& x, const Params& P);

/// Exact dyadic-family norm of a sequence fed in increasing index order
/// without storing it. Memory does not grow with the number of entries.
class DyadicStream {
public:
    explicit DyadicStream(const Params& P);

    /// Entries must arrive with strictly increasing indices.
    void push(Index k, double value);
    /// Same, with |value|^p given directly.
    void push_power(Index k, double power);

    /// r-th power of the norm of everything pushed so far.
    double power() const;
    double norm() const;

private:
    static constexpr int kLevels = 64;
    struct Cell {
        Index position = 0;
        double sum = 0.0;
        bool open = false;
    };

    void add(int level, Index position, double sum);
    void close(int level);
    double cell_power(double sum) const;

    Params params_;
    double ratio_;
    std::array<Cell, kLevels> cells_{};
    std::array<double, kLevels> closed_{};  // sum over closed cells of sum^{r/p}
    Index last_pushed_ = 0;
    Index first_ = 0, last_ = 0;  // nonzero support
    bool any_pushed_ = false, any_nonzero_ = false;
    double neg_ = 0.0, pos_ = 0.0;
};

struct EquivalenceConstants {
    double lower = 1.0;
    double upper = 1.0;
};

/// Constants of ||x||_r <= ||x|| <= C ||x||_r for q = inf.
EquivalenceConstants q_infty_constants(const Params& P);

/// Restriction of x to a finite index set U with dyadic_norm(x - y) < eps.
/// The candidate set comes from the cells carrying all but eps^r of the
/// norm; it is then shrunk by dropping the smallest entries while the exact
/// residual norm stays below eps.
SparseSeq truncate_to_tolerance(const SparseSeq& x, const Params& P, double eps);

}  // namespace bmseq
