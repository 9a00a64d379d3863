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

#include <cstdint>
#include <span>
#include <vector>

namespace bmseq {

using Index = std::int64_t;

/// Largest admissible |index|. Keeps every dyadic endpoint 2^j k with
/// j <= kMaxLevel representable without overflow.
inline constexpr Index kMaxAbsIndex = Index{1} << 52;

struct Entry {
    Index index;
    double value;

    friend bool operator==(const Entry&, const Entry&) = default;
};

/// A finitely supported real sequence on the integers.
///
/// Entries are kept sorted by index and no stored value is 0.0. Only exact
/// zeros are dropped; arbitrarily small nonzero values are kept.
class SparseSeq {
public:
    SparseSeq() = default;

    /// Builds a sequence from unordered entries. Zeros are dropped; duplicate
    /// indices, non-finite values and out-of-range indices are rejected.
    static SparseSeq from_entries(std::vector<Entry> entries);

    /// Entries already sorted with unique indices (checked).
    static SparseSeq from_sorted(std::vector<Entry> entries);

    /// value * e^n
    static SparseSeq unit(Index n, double value = 1.0);

    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }
    std::span<const Entry> entries() const noexcept { return entries_; }

    /// Throws InvalidArgument for the zero sequence.
    Index support_min() const;
    Index support_max() const;

    /// x(n), zero off the support.
    double operator[](Index n) const;

    /// Entries with index in [first, last].
    std::span<const Entry> range(Index first, Index last) const;

    SparseSeq abs() const;
    SparseSeq scaled(double factor) const;

    /// Restriction to indices in [first, last].
    SparseSeq restricted(Index first, Index last) const;

    friend SparseSeq operator+(const SparseSeq& a, const SparseSeq& b);
    friend SparseSeq operator-(const SparseSeq& a, const SparseSeq& b);
    friend SparseSeq operator*(double factor, const SparseSeq& x) { return x.scaled(factor); }
    friend bool operator==(const SparseSeq&, const SparseSeq&) = default;

private:
    std::vector<Entry> entries_;
};

/// Classical l^p norm, p in [1, inf].
double lp_norm(const SparseSeq& x, double p);

}  // namespace bmseq
