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

// Random generators for property tests. Every case is reproducible from the
// (seed, case index) pair printed on failure.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "bmseq/operators.hpp"
#include "bmseq/params.hpp"
#include "bmseq/sparse_seq.hpp"

namespace gen {

using bmseq::Index;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    Index integer(Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(eng_); }
    bool coin(double prob = 0.5) { return uniform(0.0, 1.0) < prob; }
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

struct SeqShape {
    int max_support = 16;
    Index lo = -32;
    Index hi = 31;
    double max_abs = 10.0;
    bool allow_empty = false;
};

/// Sequence with 1..max_support distinct indices in [lo, hi] and values in
/// [-max_abs, max_abs] (nonzero).
inline bmseq::SparseSeq sequence(Rng& rng, const SeqShape& s = {})
{
    const Index span = s.hi - s.lo + 1;
    const int cap = static_cast<int>(std::min<Index>(s.max_support, span));
    const int n = static_cast<int>(rng.integer(s.allow_empty ? 0 : 1, cap));
    std::set<Index> idx;
    while (static_cast<int>(idx.size()) < n) idx.insert(rng.integer(s.lo, s.hi));
    std::vector<bmseq::Entry> e;
    for (Index i : idx) {
        double v = 0.0;
        while (v == 0.0) v = rng.uniform(-s.max_abs, s.max_abs);
        e.push_back({i, v});
    }
    return bmseq::SparseSeq::from_entries(std::move(e));
}

struct ParamShape {
    double p_max = 4.0;
    double r_max = 8.0;
    double inf_q_prob = 0.0;
};

/// Valid (p, q, r): p in [1, p_max], q in (p, 6p], r in [1, r_max].
inline bmseq::Params params(Rng& rng, const ParamShape& s = {})
{
    const double p = rng.coin(0.2) ? 1.0 : rng.uniform(1.0, s.p_max);
    const double q = rng.coin(s.inf_q_prob) ? bmseq::kInf : p * rng.uniform(1.05, 6.0);
    const double r = rng.coin(0.2) ? p : rng.uniform(1.0, s.r_max);
    return bmseq::Params::make(p, q, r);
}

/// Kernel with l1 norm in [0, max_l1] supported in [-width, width].
inline bmseq::Kernel kernel(Rng& rng, double max_l1, Index width)
{
    auto k = sequence(rng, {4, -width, width, 1.0});
    const double target = rng.uniform(0.0, max_l1);
    const double l1 = bmseq::lp_norm(k, 1.0);
    return bmseq::Kernel::make(k.scaled(target / l1));
}

}  // namespace gen
