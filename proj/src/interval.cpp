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

#include "bmseq/interval.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bmseq/error.hpp"
#include "bmseq/params.hpp"

namespace bmseq {

DyadicInterval DyadicInterval::make(int level, Index position)
{
    if (level < 0 || level > kMaxLevel) {
        throw InvalidArgument("dyadic level must lie in [0, " + std::to_string(kMaxLevel) +
                              "], got " + std::to_string(level));
    }
    const Index bound = kMaxAbsIndex >> std::min(level, 52);
    if (position > bound || position < -bound - 1) {
        throw InvalidArgument("dyadic position out of range");
    }
    return {level, position};
}

DyadicInterval DyadicInterval::containing(Index n, int level)
{
    if (level < 0 || level > kMaxLevel) {
        throw InvalidArgument("dyadic level must lie in [0, " + std::to_string(kMaxLevel) + "]");
    }
    // Arithmetic shift is floor division by 2^level for negative n too.
    return {level, n >> level};
}

std::array<DyadicInterval, 2> DyadicInterval::children() const
{
    if (level < 1) throw InvalidArgument("level-0 intervals have no children");
    return {DyadicInterval{level - 1, 2 * position}, DyadicInterval{level - 1, 2 * position + 1}};
}

CenteredInterval CenteredInterval::make(Index center, Index radius)
{
    if (radius < 0) throw InvalidArgument("radius must be nonnegative");
    return {center, radius};
}

double local_lp(const SparseSeq& x, Index first, Index last, double p)
{
    if (std::isnan(p) || p < 1.0) throw InvalidArgument("local_lp: p must be >= 1");
    auto span = x.range(first, last);
    if (p == kInf) {
        double m = 0.0;
        for (const auto& e : span) m = std::max(m, std::fabs(e.value));
        return m;
    }
    // Scale by the largest entry so large p cannot underflow the sum.
    double m = 0.0;
    for (const auto& e : span) m = std::max(m, std::fabs(e.value));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (const auto& e : span) s += std::pow(std::fabs(e.value) / m, p);
    return m * std::pow(s, 1.0 / p);
}

double local_lp(const SparseSeq& x, const DyadicInterval& I, double p)
{
    return local_lp(x, I.first(), I.last(), p);
}

double local_lp(const SparseSeq& x, const CenteredInterval& S, double p)
{
    return local_lp(x, S.first(), S.last(), p);
}

std::vector<DyadicInterval> intersecting_dyadic(const SparseSeq& x, int level)
{
    if (x.empty()) throw InvalidArgument("intersecting_dyadic: zero sequence");
    if (level < 0 || level > kMaxLevel) {
        throw InvalidArgument("dyadic level must lie in [0, " + std::to_string(kMaxLevel) + "]");
    }
    std::vector<DyadicInterval> out;
    for (const auto& e : x.entries()) {
        const Index k = e.index >> level;
        if (out.empty() || out.back().position != k) out.push_back({level, k});
    }
    return out;
}

int frozen_level(const SparseSeq& x)
{
    if (x.empty()) return 0;
    const Index reach = std::max({-x.support_min(), x.support_max() + 1, Index{1}});
    int j = 0;
    while ((Index{1} << j) < reach) ++j;
    return j;
}

}  // namespace bmseq
