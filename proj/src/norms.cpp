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

#include "bmseq/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bmseq/error.hpp"
#include "bmseq/interval.hpp"

namespace bmseq {

std::string_view to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::exact: return "exact";
    case Verdict::truncated: return "truncated";
    case Verdict::divergent: return "divergent";
    }
    return "unknown";
}

namespace {

// ---------------------------------------------------------------------------
// Dyadic family
// ---------------------------------------------------------------------------

struct PowerTable {
    std::vector<double> pw;  // |x(l)|^p in entry order
    double neg = 0.0;        // sum over l < 0
    double pos = 0.0;        // sum over l >= 0
};

PowerTable power_table(const SparseSeq& x, double p)
{
    PowerTable t;
    t.pw.reserve(x.size());
    for (const auto& e : x.entries()) {
        const double v = std::pow(std::fabs(e.value), p);
        t.pw.push_back(v);
        (e.index < 0 ? t.neg : t.pos) += v;
    }
    return t;
}

// sum_k (sum_{l in I(j,k)} |x(l)|^p)^{ratio}, ascending k.
double level_sum(const SparseSeq& x, const PowerTable& t, double ratio, int level)
{
    auto entries = x.entries();
    double total = 0.0;
    double cell = 0.0;
    Index current = entries.front().index >> level;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const Index k = entries[i].index >> level;
        if (k != current) {
            total += std::pow(cell, ratio);
            cell = 0.0;
            current = k;
        }
        cell += t.pw[i];
    }
    return total + std::pow(cell, ratio);
}

double frozen_side_sum(const PowerTable& t, double ratio)
{
    double s = 0.0;
    if (t.neg > 0.0) s += std::pow(t.neg, ratio);
    if (t.pos > 0.0) s += std::pow(t.pos, ratio);
    return s;
}

// Sum over every level of the dyadic family for weight 2^{j beta}.
double dyadic_power_exact(const SparseSeq& x, double p, double r, double beta)
{
    if (x.empty()) return 0.0;
    const PowerTable t = power_table(x, p);
    const double ratio = r / p;
    const int frozen = frozen_level(x);
    double total = 0.0;
    for (int j = 0; j < frozen; ++j) {
        total += std::exp2(j * beta) * level_sum(x, t, ratio, j);
    }
    total += frozen_side_sum(t, ratio) * std::exp2(frozen * beta) / (1.0 - std::exp2(beta));
    return total;
}

void require_finite_q(const Params& P, const char* what)
{
    if (!P.q_finite()) {
        throw InvalidArgument(std::string(what) + " requires q < inf (use q_infty_norm)");
    }
}

// ---------------------------------------------------------------------------
// Centered / dyadic-length families
// ---------------------------------------------------------------------------

// Dense cumulative p-sums over the support window [smin, smax].
class WindowSums {
public:
    WindowSums(const SparseSeq& x, double p)
    {
        smin_ = x.support_min();
        const Index D = x.support_max() - smin_;
        if (D > (Index{1} << 26)) {
            throw InvalidArgument("support diameter too large for centered-family evaluation");
        }
        diameter_ = D;
        std::vector<long double> dense(static_cast<std::size_t>(D + 1), 0.0L);
        for (const auto& e : x.entries()) {
            dense[static_cast<std::size_t>(e.index - smin_)] = std::pow(std::fabs(e.value), p);
        }
        fwd_.assign(dense.size() + 1, 0.0L);
        for (std::size_t i = 0; i < dense.size(); ++i) fwd_[i + 1] = fwd_[i] + dense[i];
        rev_.assign(dense.size() + 1, 0.0L);
        for (std::size_t i = dense.size(); i-- > 0;) rev_[i] = rev_[i + 1] + dense[i];
    }

    Index diameter() const { return diameter_; }
    Index smin() const { return smin_; }
    long double total() const { return fwd_.back(); }

    // p-sum over absolute indices [a, b] clipped to the window.
    double sum(Index a, Index b) const
    {
        const Index lo = std::max<Index>(a - smin_, 0);
        const Index hi = std::min<Index>(b - smin_, diameter_);
        if (hi < lo) return 0.0;
        if (lo == 0) return static_cast<double>(fwd_[static_cast<std::size_t>(hi + 1)]);
        if (hi == diameter_) return static_cast<double>(rev_[static_cast<std::size_t>(lo)]);
        const long double s = fwd_[static_cast<std::size_t>(hi + 1)] - fwd_[static_cast<std::size_t>(lo)];
        return s > 0.0L ? static_cast<double>(s) : 0.0;
    }

    // Sum over windows of width 2R+1 meeting the support of (window p-sum)^ratio.
    long double direct(Index R, double ratio) const
    {
        long double acc = 0.0L;
        const Index smax = smin_ + diameter_;
        for (Index m = smin_ - R; m <= smax + R; ++m) {
            const double s = sum(m - R, m + R);
            if (s > 0.0) acc += std::pow(s, ratio);
        }
        return acc;
    }

    // For radii R >= D: constant part sum_t (prefix_t^ratio + suffix_t^ratio).
    long double partial_constant(double ratio) const
    {
        long double c = 0.0L;
        for (Index t = 1; t <= diameter_; ++t) {
            const auto pre = static_cast<double>(fwd_[static_cast<std::size_t>(diameter_ + 1 - t)]);
            const auto suf = static_cast<double>(rev_[static_cast<std::size_t>(t)]);
            if (pre > 0.0) c += std::pow(pre, ratio);
            if (suf > 0.0) c += std::pow(suf, ratio);
        }
        return c;
    }

private:
    Index smin_ = 0;
    Index diameter_ = 0;
    std::vector<long double> fwd_, rev_;
};

// Closed form of one radius' contribution once R >= D:
// (2R+1)^beta [(2R+1-D) Pf + Cpart].
struct LargeRadiusTerm {
    long double full;     // Pf = P^{r/p}
    long double partial;  // Cpart
    long double diameter;
    double beta;

    long double operator()(long double width) const
    {
        return std::pow(width, static_cast<long double>(beta)) *
               ((width - diameter) * full + partial);
    }
};

// Bounds for sum_{N > M} (2N+1)^g, g < -1, by integral comparison (midpoint
// above, trapezoid below; f is convex and decreasing).
struct TailBounds {
    long double lo;
    long double hi;
};

TailBounds odd_power_tail(long double M, long double g)
{
    const long double s = g + 1.0L;  // < 0
    const long double k = 2.0L * (-s);
    const long double upper = std::pow(2.0L * M + 2.0L, s) / k;
    const long double integral = std::pow(2.0L * M + 3.0L, s) / k;
    const long double half = 0.5L * std::pow(2.0L * M + 3.0L, g);
    return {integral + half, upper};
}

// Bounds for sum_{N > M} (2^{N+1}+1)^g, g < 0.
TailBounds dyadic_width_tail(long double M, long double g)
{
    const long double ratio = std::exp2(g);
    const long double upper = std::exp2((M + 2.0L) * g) / (1.0L - ratio);
    const long double lower = upper * std::pow(1.0L + std::exp2(-(M + 2.0L)), g);
    return {lower, upper};
}

// Combines the two tail series Pf*sum f_{beta+1} + c0*sum f_beta.
TailBounds combine(long double full, const TailBounds& t1, long double c0, const TailBounds& t0)
{
    long double lo = full * t1.lo + (c0 >= 0 ? c0 * t0.lo : c0 * t0.hi);
    long double hi = full * t1.hi + (c0 >= 0 ? c0 * t0.hi : c0 * t0.lo);
    return {std::max(lo, 0.0L), std::max(hi, 0.0L)};
}

NormResult finish(long double power, long double remainder, Verdict v, double r)
{
    NormResult res;
    res.value = static_cast<double>(std::pow(std::max(power, 0.0L), 1.0L / r));
    res.remainder_bound = static_cast<double>(remainder);
    res.verdict = v;
    return res;
}

void require_positive_tol(double tol)
{
    if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
}

}  // namespace

// ---------------------------------------------------------------------------

NormResult dyadic_norm(const SparseSeq& x, const Params& P)
{
    require_finite_q(P, "dyadic_norm");
    NormResult res;
    res.value = std::pow(dyadic_power_exact(x, P.p(), P.r(), P.beta()), 1.0 / P.r());
    return res;
}

NormResult q_infty_norm(const SparseSeq& x, const Params& P)
{
    if (P.q_finite()) throw InvalidArgument("q_infty_norm requires q = inf");
    NormResult res;
    res.value = std::pow(dyadic_power_exact(x, P.p(), P.r(), P.beta()), 1.0 / P.r());
    return res;
}

double dyadic_family_norm(const SparseSeq& x, const Params& P)
{
    return std::pow(dyadic_power_exact(x, P.p(), P.r(), P.beta()), 1.0 / P.r());
}

std::vector<double> dyadic_level_sums(const SparseSeq& x, const Params& P, int max_level)
{
    if (max_level < 0) throw InvalidArgument("max_level must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(max_level) + 1, 0.0);
    if (x.empty()) return out;
    const PowerTable t = power_table(x, P.p());
    const double ratio = P.r() / P.p();
    const int frozen = frozen_level(x);
    const double side = frozen_side_sum(t, ratio);
    for (int j = 0; j <= max_level; ++j) {
        const double s = j < frozen ? level_sum(x, t, ratio, j) : side;
        out[static_cast<std::size_t>(j)] = std::exp2(j * P.beta()) * s;
    }
    return out;
}

double dyadic_power_through(const SparseSeq& x, const Params& P, int max_level)
{
    const auto sums = dyadic_level_sums(x, P, max_level);
    return std::accumulate(sums.begin(), sums.end(), 0.0);
}

double dyadic_tail_bound(const SparseSeq& x, const Params& P, int level)
{
    if (level < 0) throw InvalidArgument("level must be >= 0");
    if (x.empty()) return 0.0;
    const double ratio = P.r() / P.p();
    const double geometric = std::exp2((level + 1) * P.beta()) / (1.0 - std::exp2(P.beta()));
    if (level + 1 >= frozen_level(x)) {
        return frozen_side_sum(power_table(x, P.p()), ratio) * geometric;
    }
    // Any level contributes at most ||x||_p^r (r >= p) or ||x||_r^r (r < p).
    const double per_level = P.r() >= P.p() ? std::pow(lp_norm(x, P.p()), P.r())
                                            : std::pow(lp_norm(x, P.r()), P.r());
    return per_level * geometric;
}

std::vector<double> dyadic_norm_gradient(const SparseSeq& x, const Params& P)
{
    if (x.empty()) throw InvalidArgument("gradient of the norm is undefined at 0");
    const PowerTable t = power_table(x, P.p());
    const double ratio = P.r() / P.p();
    const double beta = P.beta();
    const int frozen = frozen_level(x);
    auto entries = x.entries();
    std::vector<double> G(entries.size(), 0.0);
    for (int j = 0; j < frozen; ++j) {
        const double w = std::exp2(j * beta);
        std::size_t start = 0;
        while (start < entries.size()) {
            const Index k = entries[start].index >> j;
            std::size_t stop = start;
            double cell = 0.0;
            while (stop < entries.size() && (entries[stop].index >> j) == k) cell += t.pw[stop++];
            const double g = w * std::pow(cell, ratio - 1.0);
            for (std::size_t i = start; i < stop; ++i) G[i] += g;
            start = stop;
        }
    }
    const double geometric = std::exp2(frozen * beta) / (1.0 - std::exp2(beta));
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const double side = entries[i].index < 0 ? t.neg : t.pos;
        G[i] += geometric * std::pow(side, ratio - 1.0);
    }
    const double norm = std::pow(dyadic_power_exact(x, P.p(), P.r(), beta), 1.0 / P.r());
    const double scale = std::pow(norm, 1.0 - P.r());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const double v = entries[i].value;
        const double mag = P.p() == 1.0 ? 1.0 : std::pow(std::fabs(v), P.p() - 1.0);
        G[i] = scale * mag * std::copysign(1.0, v) * G[i];
    }
    return G;
}

// ---------------------------------------------------------------------------

double centered_power_partial(const SparseSeq& x, const Params& P, Index max_radius)
{
    if (x.empty() || max_radius < 0) return 0.0;
    const WindowSums w(x, P.p());
    const double ratio = P.r() / P.p();
    const Index D = w.diameter();
    long double acc = 0.0L;
    for (Index N = 0; N <= std::min(max_radius, D - 1); ++N) {
        acc += std::pow(static_cast<long double>(2 * N + 1), static_cast<long double>(P.beta())) *
               w.direct(N, ratio);
    }
    if (max_radius >= D) {
        const LargeRadiusTerm term{std::pow(w.total(), static_cast<long double>(ratio)),
                                   w.partial_constant(ratio), static_cast<long double>(D), P.beta()};
        for (Index N = D; N <= max_radius; ++N) acc += term(static_cast<long double>(2 * N + 1));
    }
    return static_cast<double>(acc);
}

NormResult centered_norm(const SparseSeq& x, const Params& P, double tol, const SeriesLimits& limits)
{
    require_positive_tol(tol);
    if (x.empty()) return {};
    const WindowSums w(x, P.p());
    const double ratio = P.r() / P.p();
    const Index D = w.diameter();
    const long double beta = P.beta();

    long double acc = 0.0L;
    for (Index N = 0; N < D; ++N) {
        acc += std::pow(static_cast<long double>(2 * N + 1), beta) * w.direct(N, ratio);
    }
    const LargeRadiusTerm term{std::pow(w.total(), static_cast<long double>(ratio)),
                               w.partial_constant(ratio), static_cast<long double>(D), P.beta()};

    if (beta + 1.0L >= -1.0L) {
        const Index last = D + limits.divergent_partial_radius;
        for (Index N = D; N <= last; ++N) acc += term(static_cast<long double>(2 * N + 1));
        return finish(acc, kInf, Verdict::divergent, P.r());
    }

    const long double c0 = term.partial - term.diameter * term.full;
    TailBounds tail{0, 0};
    for (Index N = D;; ++N) {
        acc += term(static_cast<long double>(2 * N + 1));
        const bool checkpoint = ((N - D) % 64 == 0) || N >= limits.max_radius;
        if (!checkpoint) continue;
        const auto M = static_cast<long double>(N);
        tail = combine(term.full, odd_power_tail(M, beta + 1.0L), c0, odd_power_tail(M, beta));
        if (tail.hi - tail.lo < tol || N >= limits.max_radius) break;
    }
    return finish(acc + tail.lo, tail.hi - tail.lo, Verdict::truncated, P.r());
}

NormResult dyadic_length_norm(const SparseSeq& x, const Params& P, double tol, bool include_singletons,
                              const SeriesLimits& limits)
{
    require_positive_tol(tol);
    if (x.empty()) return {};
    const WindowSums w(x, P.p());
    const double ratio = P.r() / P.p();
    const Index D = w.diameter();
    const long double beta = P.beta();

    long double acc = 0.0L;
    if (include_singletons) {
        for (const auto& e : x.entries()) acc += std::pow(std::fabs(static_cast<long double>(e.value)), P.r());
    }

    int N = 0;
    for (; N < 62 && (Index{1} << N) < D; ++N) {
        const Index R = Index{1} << N;
        acc += std::pow(static_cast<long double>(2 * R + 1), beta) * w.direct(R, ratio);
    }
    const LargeRadiusTerm term{std::pow(w.total(), static_cast<long double>(ratio)),
                               w.partial_constant(ratio), static_cast<long double>(D), P.beta()};
    auto width_at = [](int level) { return std::exp2(static_cast<long double>(level + 1)) + 1.0L; };

    if (beta >= -1.0L) {
        for (int k = 0; k < 64; ++k, ++N) acc += term(width_at(N));
        return finish(acc, kInf, Verdict::divergent, P.r());
    }

    const long double c0 = term.partial - term.diameter * term.full;
    TailBounds tail{0, 0};
    for (;; ++N) {
        acc += term(width_at(N));
        const auto M = static_cast<long double>(N);
        tail = combine(term.full, dyadic_width_tail(M, beta + 1.0L), c0, dyadic_width_tail(M, beta));
        if (tail.hi - tail.lo < tol || N >= limits.max_dyadic_length_level) break;
    }
    return finish(acc + tail.lo, tail.hi - tail.lo, Verdict::truncated, P.r());
}

// ---------------------------------------------------------------------------

// ---------------------------------------------------------------------------
// Streaming evaluation
// ---------------------------------------------------------------------------

DyadicStream::DyadicStream(const Params& P) : params_(P), ratio_(P.r() / P.p()) {}

double DyadicStream::cell_power(double sum) const
{
    if (sum <= 0.0) return 0.0;
    if (ratio_ == 1.0) return sum;
    if (ratio_ == 2.0) return sum * sum;
    return std::pow(sum, ratio_);
}

void DyadicStream::close(int level)
{
    Cell& c = cells_[static_cast<std::size_t>(level)];
    closed_[static_cast<std::size_t>(level)] += cell_power(c.sum);
    c.open = false;
    if (level + 1 < kLevels) add(level + 1, c.position >> 1, c.sum);
}

// Puts sum into cell `position` of `level`; a different open cell there is
// closed and carried to its parent.
void DyadicStream::add(int level, Index position, double sum)
{
    for (; level < kLevels; ++level) {
        Cell& c = cells_[static_cast<std::size_t>(level)];
        if (c.open && c.position == position) {
            c.sum += sum;
            return;
        }
        const Cell old = c;
        c = {position, sum, true};
        if (!old.open) return;
        closed_[static_cast<std::size_t>(level)] += cell_power(old.sum);
        position = old.position >> 1;
        sum = old.sum;
    }
}

void DyadicStream::push(Index k, double value)
{
    push_power(k, std::pow(std::fabs(value), params_.p()));
}

void DyadicStream::push_power(Index k, double power)
{
    if (!(power >= 0.0) || !std::isfinite(power)) throw InvalidArgument("stream entries must be finite");
    if (any_pushed_ && k <= last_pushed_) throw InvalidArgument("stream indices must increase strictly");
    any_pushed_ = true;
    last_pushed_ = k;
    if (power == 0.0) return;
    if (!any_nonzero_) first_ = k;
    any_nonzero_ = true;
    last_ = k;
    (k < 0 ? neg_ : pos_) += power;
    // Indices never repeat, so each level-0 cell closes at once.
    closed_[0] += cell_power(power);
    add(1, k >> 1, power);
}

double DyadicStream::power() const
{
    if (!any_nonzero_) return 0.0;
    const Index reach = std::max({-first_, last_ + 1, Index{1}});
    int frozen = 0;
    while ((Index{1} << frozen) < reach) ++frozen;

    DyadicStream s = *this;
    for (int j = 0; j < frozen; ++j) {
        if (s.cells_[static_cast<std::size_t>(j)].open) s.close(j);
    }
    const long double beta = params_.beta();
    long double total = 0.0L;
    for (int j = 0; j < frozen; ++j) total += std::exp2(j * beta) * s.closed_[static_cast<std::size_t>(j)];
    total += (cell_power(neg_) + cell_power(pos_)) * std::exp2(frozen * beta) / (1.0L - std::exp2(beta));
    return static_cast<double>(total);
}

double DyadicStream::norm() const
{
    return std::pow(power(), 1.0 / params_.r());
}

double c_pq_constant(const Params& P)
{
    require_finite_q(P, "c_pq_constant");
    return std::pow(1.0 / (1.0 - std::exp2(P.p() / P.q() - 1.0)), 1.0 / P.p());
}

double embedding_constant_K(const Params& P)
{
    require_finite_q(P, "embedding_constant_K");
    return dyadic_norm(SparseSeq::unit(0), P).value;
}

EquivalenceConstants q_infty_constants(const Params& P)
{
    if (P.q_finite()) throw InvalidArgument("q_infty_constants requires q = inf");
    const double r = P.r();
    const double p = P.p();
    EquivalenceConstants c;
    c.upper = r >= p ? std::exp2(1.0 / r) : std::pow(1.0 - std::exp2(-r / p), -1.0 / r);
    return c;
}

// ---------------------------------------------------------------------------

SparseSeq truncate_to_tolerance(const SparseSeq& x, const Params& P, double eps)
{
    if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
    if (x.empty()) return x;
    const double p = P.p();
    const double r = P.r();
    const double beta = P.beta();
    const double budget = std::pow(eps, r);
    auto residual_norm = [&](const SparseSeq& y) {
        return std::pow(dyadic_power_exact(x - y, p, r, beta), 1.0 / r);
    };

    // Cells of the dyadic family with their contributions. Levels from the
    // frozen level on are grouped per side of 0: any of them covers the whole
    // half of the support.
    struct Cell {
        double weight;
        Index first;
        Index last;
    };
    std::vector<Cell> cells;
    const PowerTable t = power_table(x, p);
    const int frozen = frozen_level(x);
    auto entries = x.entries();
    for (int j = 0; j < frozen; ++j) {
        const double w = std::exp2(j * beta);
        std::size_t i = 0;
        while (i < entries.size()) {
            const Index k = entries[i].index >> j;
            double s = 0.0;
            while (i < entries.size() && (entries[i].index >> j) == k) s += t.pw[i++];
            const auto I = DyadicInterval{j, k};
            cells.push_back({w * std::pow(s, r / p), I.first(), I.last()});
        }
    }
    const double geometric = std::exp2(frozen * beta) / (1.0 - std::exp2(beta));
    if (t.neg > 0.0) cells.push_back({std::pow(t.neg, r / p) * geometric, x.support_min(), -1});
    if (t.pos > 0.0) cells.push_back({std::pow(t.pos, r / p) * geometric, 0, x.support_max()});

    std::stable_sort(cells.begin(), cells.end(),
                     [](const Cell& a, const Cell& b) { return a.weight > b.weight; });
    // unselected[i] = total weight of cells i, i+1, ... (smallest summed first).
    std::vector<double> unselected(cells.size() + 1, 0.0);
    for (std::size_t i = cells.size(); i-- > 0;) unselected[i] = unselected[i + 1] + cells[i].weight;
    std::size_t chosen = 0;
    while (chosen < cells.size() && !(unselected[chosen] < budget)) ++chosen;

    std::vector<Entry> kept;
    for (const auto& e : entries) {
        for (std::size_t c = 0; c < chosen; ++c) {
            if (e.index >= cells[c].first && e.index <= cells[c].last) {
                kept.push_back(e);
                break;
            }
        }
    }
    SparseSeq y = SparseSeq::from_sorted(kept);

    // Shrink: drop the m smallest kept entries, m maximal with residual < eps.
    // The residual grows pointwise in m, so its norm is monotone.
    std::vector<Entry> order(kept.begin(), kept.end());
    std::stable_sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
        return std::fabs(a.value) < std::fabs(b.value);
    });
    auto drop_smallest = [&](std::size_t m) {
        std::vector<Entry> dropped(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
        return y - SparseSeq::from_entries(std::move(dropped));
    };
    std::size_t lo = 0, hi = order.size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo + 1) / 2;
        if (residual_norm(drop_smallest(mid)) < eps) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    SparseSeq out = drop_smallest(lo);
    if (!(residual_norm(out) < eps)) {
        // Only reachable through rounding in the cell bound; x itself is exact.
        return x;
    }
    return out;
}

}  // namespace bmseq
