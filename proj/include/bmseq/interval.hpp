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
#include <compare>
#include <vector>

#include "bmseq/sparse_seq.hpp"

namespace bmseq {

/// Highest dyadic level the library enumerates; 2^kMaxLevel * (|k|+1) must
/// stay inside int64 for every admissible index.
inline constexpr int kMaxLevel = 62;

/// The integer set I(j,k) = [2^j k, 2^j (k+1)).
struct DyadicInterval {
    int level = 0;
    Index position = 0;

    /// Throws InvalidArgument for negative or too large levels.
    static DyadicInterval make(int level, Index position);

    /// The unique level-j interval containing n.
    static DyadicInterval containing(Index n, int level);

    Index first() const noexcept { return position * (Index{1} << level); }
    Index last() const noexcept { return first() + ((Index{1} << level) - 1); }
    Index size() const noexcept { return Index{1} << level; }
    bool contains(Index n) const noexcept { return n >= first() && n <= last(); }

    DyadicInterval parent() const { return make(level + 1, position >> 1); }
    /// Left and right halves; level must be >= 1.
    std::array<DyadicInterval, 2> children() const;

    /// Sorted by level, then position.
    friend auto operator<=>(const DyadicInterval&, const DyadicInterval&) = default;
};

/// S_{m,N} = {m - N, ..., m + N}.
struct CenteredInterval {
    Index center = 0;
    Index radius = 0;

    static CenteredInterval make(Index center, Index radius);

    Index first() const noexcept { return center - radius; }
    Index last() const noexcept { return center + radius; }
    Index size() const noexcept { return 2 * radius + 1; }
    CenteredInterval translated(Index t) const noexcept { return {center + t, radius}; }

    friend bool operator==(const CenteredInterval&, const CenteredInterval&) = default;
};

/// (sum_{l in [first,last]} |x(l)|^p)^{1/p}; p = inf gives the local sup.
double local_lp(const SparseSeq& x, Index first, Index last, double p);
double local_lp(const SparseSeq& x, const DyadicInterval& I, double p);
double local_lp(const SparseSeq& x, const CenteredInterval& S, double p);

/// Level-j intervals meeting supp(x), in increasing position order.
/// Throws InvalidArgument for the zero sequence or a bad level.
std::vector<DyadicInterval> intersecting_dyadic(const SparseSeq& x, int level);

/// Smallest level J with 2^J >= max(-support_min, support_max + 1, 1). From
/// this level on only I(j,-1) and I(j,0) meet the support.
int frozen_level(const SparseSeq& x);

}  // namespace bmseq
