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

#include <vector>

#include "bmseq/interval.hpp"
#include "bmseq/params.hpp"
#include "bmseq/sparse_seq.hpp"

namespace bmseq {

inline constexpr double kBlockTolerance = 1e-12;

/// |I|^{1/q - 1/p}: the largest admissible p'-norm of a block on I.
double block_bound(const DyadicInterval& I, const Params& P);

/// A sequence supported in I whose p'-norm is at most block_bound(I).
class Block {
public:
    /// Validates support containment and the block bound.
    static Block make(const DyadicInterval& I, SparseSeq values, const Params& P);

    const DyadicInterval& interval() const noexcept { return interval_; }
    const SparseSeq& values() const noexcept { return values_; }

private:
    friend class BlockRepresentation;
    friend struct ExtremalBlock;
    Block(const DyadicInterval& I, SparseSeq values) : interval_(I), values_(std::move(values)) {}

    DyadicInterval interval_;
    SparseSeq values_;
};

struct BlockTerm {
    double coefficient;
    Block block;
};

/// sum_I lambda_I b_I with at most one term per interval, sorted by
/// (level, position). Adding a term on an interval already present merges
/// the two into one maximal block.
class BlockRepresentation {
public:
    explicit BlockRepresentation(const Params& P) : params_(P) {}

    void add(double coefficient, const Block& block);

    const Params& params() const noexcept { return params_; }
    const std::vector<BlockTerm>& terms() const noexcept { return terms_; }

    /// (sum |lambda|^{r'})^{1/r'}; an upper bound for the block norm of value().
    double coefficient_norm() const;

    /// The represented sequence sum lambda_I b_I.
    SparseSeq value() const;

private:
    Params params_;
    std::vector<BlockTerm> terms_;
};

/// supp(y) in I and ||y||_{p'} <= |I|^{1/q-1/p} + kBlockTolerance.
bool is_block(const SparseSeq& y, const DyadicInterval& I, const Params& P);

/// |I|^{1/p-1/q} ||y||_{p'}: the norm of the one-term representation of y
/// as a multiple of a maximal block on I. Throws if supp(y) leaves I.
double single_block_bound(const SparseSeq& y, const DyadicInterval& I, const Params& P);

/// One singleton block per support point, lambda = y(n).
BlockRepresentation canonical_representation(const SparseSeq& y, const Params& P);

struct BlockNormUpper {
    double value = 0.0;
    BlockRepresentation representation;
    int iterations = 0;   ///< sweeps performed
    int max_level = 0;
};

/// ceil(log2(support width)) + 8, capped at kMaxLevel; 8 for y = 0.
int default_block_max_level(const SparseSeq& y);

/// Upper bound for the block norm by convex minimisation over
/// decompositions y = sum_I y_I, I ranging over dyadic intervals of level
/// <= max_level meeting supp(y). Never exceeds the canonical bound or the
/// best single covering interval.
BlockNormUpper block_norm_upper(const SparseSeq& y, const Params& P, int max_level, int iterations = 500);

/// b_I(m) = |I|^{1/q-1/p} ||x||_{p,I}^{1-p} |x(m)|^{p-1} sgn x(m) on I.
/// Throws InvalidArgument when x vanishes on I.
Block extremal_block(const SparseSeq& x, const DyadicInterval& I, const Params& P);

struct ExtremalBlock {
    Block block;
    bool zero;  ///< x vanishes on I; block is the zero block

    static ExtremalBlock of(const SparseSeq& x, const DyadicInterval& I, const Params& P);
};

}  // namespace bmseq
