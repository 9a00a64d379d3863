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

#include "bmseq/block_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <span>

#include "bmseq/error.hpp"

namespace bmseq {

namespace {

bool inside(const SparseSeq& y, const DyadicInterval& I)
{
    return y.empty() || (y.support_min() >= I.first() && y.support_max() <= I.last());
}

// |I|^{1/p - 1/q}, the price of one unit of p'-mass on I.
double interval_weight(int level, const Params& P)
{
    return std::exp2(-level * P.scale_exponent());
}

double power_norm(std::span<const double> v, double e)
{
    if (e == kInf) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::fabs(x));
        return m;
    }
    double s = 0.0;
    for (double x : v) s += std::pow(std::fabs(x), e);
    return std::pow(s, 1.0 / e);
}

// Minimises sum_n |a_n - u_n|^{rc} + w^{rc} ||u||_{pc}^{rc} over u for one
// interval. The minimiser keeps the signs of a with 0 <= |u_n| <= |a_n|.
class IntervalStep {
public:
    IntervalStep(double pc, double rc) : pc_(pc), rc_(rc), equal_(std::fabs(pc - rc) < 1e-14) {}

    void solve(std::span<const double> a, double w, std::span<double> u) const
    {
        double amax = 0.0;
        for (double x : a) amax = std::max(amax, std::fabs(x));
        if (amax == 0.0) {
            std::fill(u.begin(), u.end(), 0.0);
            return;
        }
        if (equal_) {
            // c t^{pc-1} = (|a|-t)^{pc-1} with c = w^{pc}: t = |a| / (1 + w^p).
            const double shrink = 1.0 / (1.0 + std::pow(w, pc_ / (pc_ - 1.0)));
            for (std::size_t n = 0; n < a.size(); ++n) u[n] = a[n] * shrink;
            return;
        }
        // Fixed point in s = ||u||_{pc}: u depends on c = w^{rc} s^{rc-pc}.
        // phi(s) = ||u(c(s))|| - s is positive near 0 and negative at ||a||.
        auto phi = [&](double log_s) {
            const double log_c = rc_ * std::log(w) + (rc_ - pc_) * log_s;
            fill(a, log_c, u);
            return std::log(power_norm(u, pc_)) - log_s;
        };
        double hi = std::log(power_norm(a, pc_));
        double lo = hi - 1.0;
        while (phi(lo) <= 0.0 && lo > hi - 1500.0) lo -= 2.0 * (hi - lo);
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            (phi(mid) > 0.0 ? lo : hi) = mid;
        }
        phi(0.5 * (lo + hi));
    }

private:
    // u_n = sgn(a_n) |a_n| rho_n with c (|a| rho)^{pc-1} = (|a| (1-rho))^{rc-1}.
    void fill(std::span<const double> a, double log_c, std::span<double> u) const
    {
        for (std::size_t n = 0; n < a.size(); ++n) {
            const double A = std::fabs(a[n]);
            if (A == 0.0) {
                u[n] = 0.0;
                continue;
            }
            const double la = std::log(A);
            auto h = [&](double rho) {
                return log_c + (pc_ - 1.0) * (la + std::log(rho)) - (rc_ - 1.0) * (la + std::log1p(-rho));
            };
            double lo = 0.0, hi = 1.0, rho = 0.5;
            for (int it = 0; it < 100; ++it) {
                const double v = h(rho);
                if (v > 0.0) hi = rho; else lo = rho;
                const double slope = (pc_ - 1.0) / rho + (rc_ - 1.0) / (1.0 - rho);
                double next = rho - v / slope;
                if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                if (std::fabs(next - rho) <= 1e-16 * rho) {
                    rho = next;
                    break;
                }
                rho = next;
            }
            u[n] = std::copysign(A * rho, a[n]);
        }
    }

    double pc_, rc_;
    bool equal_;
};

struct Cell {
    int level;
    Index position;
    std::size_t lo, hi;  // entry range of supp(y) inside the cell
    double weight;
    std::vector<double> v;
};

}  // namespace

double block_bound(const DyadicInterval& I, const Params& P)
{
    return std::exp2(I.level * P.scale_exponent());
}

Block Block::make(const DyadicInterval& I, SparseSeq values, const Params& P)
{
    if (!inside(values, I)) throw InvalidArgument("block values leave their interval");
    if (!is_block(values, I, P)) throw InvalidArgument("block exceeds the admissible p'-norm");
    return Block(I, std::move(values));
}

void BlockRepresentation::add(double coefficient, const Block& block)
{
    if (coefficient == 0.0 || block.values().empty()) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), block.interval(),
                               [](const BlockTerm& t, const DyadicInterval& I) { return t.block.interval() < I; });
    if (it == terms_.end() || it->block.interval() != block.interval()) {
        terms_.insert(it, BlockTerm{coefficient, block});
        return;
    }
    const SparseSeq merged = it->coefficient * it->block.values() + coefficient * block.values();
    if (merged.empty()) {
        terms_.erase(it);
        return;
    }
    const double lambda = lp_norm(merged, params_.p_conj()) / block_bound(block.interval(), params_);
    it->coefficient = lambda;
    it->block = Block(block.interval(), merged.scaled(1.0 / lambda));
}

double BlockRepresentation::coefficient_norm() const
{
    const double rc = params_.r_conj();
    if (rc == kInf) {
        double m = 0.0;
        for (const auto& t : terms_) m = std::max(m, std::fabs(t.coefficient));
        return m;
    }
    double s = 0.0;
    for (const auto& t : terms_) s += std::pow(std::fabs(t.coefficient), rc);
    return std::pow(s, 1.0 / rc);
}

SparseSeq BlockRepresentation::value() const
{
    std::map<Index, double> acc;
    for (const auto& t : terms_) {
        for (const auto& e : t.block.values().entries()) acc[e.index] += t.coefficient * e.value;
    }
    std::vector<Entry> out;
    out.reserve(acc.size());
    for (const auto& [n, v] : acc) out.push_back({n, v});
    return SparseSeq::from_sorted(std::move(out));
}

bool is_block(const SparseSeq& y, const DyadicInterval& I, const Params& P)
{
    if (!inside(y, I)) return false;
    return lp_norm(y, P.p_conj()) <= block_bound(I, P) + kBlockTolerance;
}

double single_block_bound(const SparseSeq& y, const DyadicInterval& I, const Params& P)
{
    if (!inside(y, I)) throw InvalidArgument("single_block_bound: support leaves the interval");
    return interval_weight(I.level, P) * lp_norm(y, P.p_conj());
}

BlockRepresentation canonical_representation(const SparseSeq& y, const Params& P)
{
    BlockRepresentation rep(P);
    for (const auto& e : y.entries()) {
        rep.add(e.value, Block::make(DyadicInterval::make(0, e.index), SparseSeq::unit(e.index), P));
    }
    return rep;
}

int default_block_max_level(const SparseSeq& y)
{
    if (y.empty()) return 8;
    const auto width = static_cast<double>(y.support_max() - y.support_min() + 1);
    return std::min(kMaxLevel, static_cast<int>(std::ceil(std::log2(width))) + 8);
}

BlockNormUpper block_norm_upper(const SparseSeq& y, const Params& P, int max_level, int iterations)
{
    if (iterations <= 0) throw InvalidArgument("iterations must be positive");
    if (max_level < 0 || max_level > kMaxLevel) throw InvalidArgument("max_level out of range");
    BlockNormUpper out{0.0, BlockRepresentation(P), 0, max_level};
    if (y.empty()) return out;

    const double pc = P.p_conj();
    const double rc = P.r_conj();
    auto entries = y.entries();
    const std::size_t n = entries.size();

    std::vector<Cell> cells;
    for (int L = 1; L <= max_level; ++L) {
        std::size_t i = 0;
        while (i < n) {
            const Index k = entries[i].index >> L;
            const std::size_t lo = i;
            while (i < n && (entries[i].index >> L) == k) ++i;
            cells.push_back({L, k, lo, i, interval_weight(L, P), std::vector<double>(i - lo, 0.0)});
        }
    }

    // Singleton residual s(n) = y(n) - sum_{cells} v_I(n).
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = entries[i].value;

    auto objective = [&]() {
        if (rc == kInf) {
            double m = 0.0;
            for (double x : s) m = std::max(m, std::fabs(x));
            for (const auto& c : cells) m = std::max(m, c.weight * power_norm(c.v, pc));
            return m;
        }
        double phi = 0.0;
        for (double x : s) phi += std::pow(std::fabs(x), rc);
        for (const auto& c : cells) {
            if (std::any_of(c.v.begin(), c.v.end(), [](double x) { return x != 0.0; })) {
                phi += std::pow(c.weight * power_norm(c.v, pc), rc);
            }
        }
        return phi;
    };

    // Start from the best single covering cell if it beats the canonical one.
    double best = objective();
    for (auto& c : cells) {
        if (c.lo != 0 || c.hi != n) continue;
        std::vector<double> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = entries[i].value;
        const double single = c.weight * power_norm(all, pc);
        const double cost = rc == kInf ? single : std::pow(single, rc);
        if (cost < best) {
            c.v = all;
            std::fill(s.begin(), s.end(), 0.0);
            best = cost;
        }
        break;
    }

    // With p' = inf or r' = inf the objective is not smooth; keep the start.
    if (rc != kInf && pc != kInf) {
        const IntervalStep step(pc, rc);
        std::vector<double> a, u;
        for (int sweep = 0; sweep < iterations; ++sweep) {
            for (auto& c : cells) {
                const std::size_t m = c.hi - c.lo;
                a.resize(m);
                u.resize(m);
                for (std::size_t i = 0; i < m; ++i) a[i] = s[c.lo + i] + c.v[i];
                step.solve(a, c.weight, u);
                for (std::size_t i = 0; i < m; ++i) {
                    s[c.lo + i] = a[i] - u[i];
                    c.v[i] = u[i];
                }
            }
            out.iterations = sweep + 1;
            const double now = objective();
            const bool stalled = !(now < best - 1e-15 * best);
            best = std::min(best, now);
            if (stalled) break;
        }
    }

    BlockRepresentation& rep = out.representation;
    for (const auto& c : cells) {
        const double norm = power_norm(c.v, pc);
        if (norm == 0.0) continue;
        const double lambda = c.weight * norm;
        std::vector<Entry> b;
        for (std::size_t i = 0; i < c.v.size(); ++i) {
            if (c.v[i] != 0.0) b.push_back({entries[c.lo + i].index, c.v[i] / lambda});
        }
        rep.add(lambda, Block::make(DyadicInterval{c.level, c.position}, SparseSeq::from_sorted(std::move(b)), P));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (s[i] != 0.0) {
            rep.add(s[i], Block::make(DyadicInterval{0, entries[i].index}, SparseSeq::unit(entries[i].index), P));
        }
    }
    out.value = rep.coefficient_norm();
    return out;
}

ExtremalBlock ExtremalBlock::of(const SparseSeq& x, const DyadicInterval& I, const Params& P)
{
    const double p = P.p();
    const double local = local_lp(x, I, p);
    if (local == 0.0) return {Block(I, SparseSeq{}), true};
    const double scale = block_bound(I, P) * std::pow(local, 1.0 - p);
    std::vector<Entry> b;
    for (const auto& e : x.range(I.first(), I.last())) {
        const double mag = p == 1.0 ? 1.0 : std::pow(std::fabs(e.value), p - 1.0);
        b.push_back({e.index, std::copysign(scale * mag, e.value)});
    }
    return {Block(I, SparseSeq::from_sorted(std::move(b))), false};
}

Block extremal_block(const SparseSeq& x, const DyadicInterval& I, const Params& P)
{
    auto eb = ExtremalBlock::of(x, I, P);
    if (eb.zero) throw InvalidArgument("extremal_block: x vanishes on the interval");
    return eb.block;
}

}  // namespace bmseq
