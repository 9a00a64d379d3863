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

#include "bmseq/sparse_seq.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bmseq/error.hpp"
#include "bmseq/params.hpp"

namespace bmseq {

namespace {

void check_entry(const Entry& e)
{
    if (!std::isfinite(e.value)) {
        throw InvalidArgument("non-finite value at index " + std::to_string(e.index));
    }
    if (e.index > kMaxAbsIndex || e.index < -kMaxAbsIndex) {
        throw InvalidArgument("index " + std::to_string(e.index) + " out of range");
    }
}

}  // namespace

SparseSeq SparseSeq::from_entries(std::vector<Entry> entries)
{
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.index < b.index; });
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].index == entries[i - 1].index) {
            throw InvalidArgument("duplicate index " + std::to_string(entries[i].index));
        }
    }
    return from_sorted(std::move(entries));
}

SparseSeq SparseSeq::from_sorted(std::vector<Entry> entries)
{
    for (std::size_t i = 0; i < entries.size(); ++i) {
        check_entry(entries[i]);
        if (i > 0 && entries[i].index <= entries[i - 1].index) {
            throw InvalidArgument("entries not strictly increasing in index");
        }
    }
    std::erase_if(entries, [](const Entry& e) { return e.value == 0.0; });
    SparseSeq x;
    x.entries_ = std::move(entries);
    return x;
}

SparseSeq SparseSeq::unit(Index n, double value)
{
    return from_sorted({{n, value}});
}

Index SparseSeq::support_min() const
{
    if (entries_.empty()) throw InvalidArgument("zero sequence has no support");
    return entries_.front().index;
}

Index SparseSeq::support_max() const
{
    if (entries_.empty()) throw InvalidArgument("zero sequence has no support");
    return entries_.back().index;
}

double SparseSeq::operator[](Index n) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                               [](const Entry& e, Index i) { return e.index < i; });
    return (it != entries_.end() && it->index == n) ? it->value : 0.0;
}

std::span<const Entry> SparseSeq::range(Index first, Index last) const
{
    if (last < first) return {};
    auto lo = std::lower_bound(entries_.begin(), entries_.end(), first,
                               [](const Entry& e, Index i) { return e.index < i; });
    auto hi = std::upper_bound(lo, entries_.end(), last,
                               [](Index i, const Entry& e) { return i < e.index; });
    return {lo, hi};
}

SparseSeq SparseSeq::abs() const
{
    SparseSeq out = *this;
    for (auto& e : out.entries_) e.value = std::fabs(e.value);
    return out;
}

SparseSeq SparseSeq::scaled(double factor) const
{
    if (!std::isfinite(factor)) throw InvalidArgument("non-finite scale factor");
    SparseSeq out;
    out.entries_.reserve(entries_.size());
    for (const auto& e : entries_) {
        const double v = factor * e.value;
        if (v != 0.0) out.entries_.push_back({e.index, v});
    }
    return out;
}

SparseSeq SparseSeq::restricted(Index first, Index last) const
{
    auto span = range(first, last);
    SparseSeq out;
    out.entries_.assign(span.begin(), span.end());
    return out;
}

namespace {

template <class Op>
SparseSeq merge(const SparseSeq& a, const SparseSeq& b, Op op)
{
    std::vector<Entry> out;
    out.reserve(a.size() + b.size());
    auto ea = a.entries();
    auto eb = b.entries();
    std::size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
        Entry e;
        if (j == eb.size() || (i < ea.size() && ea[i].index < eb[j].index)) {
            e = {ea[i].index, op(ea[i].value, 0.0)};
            ++i;
        } else if (i == ea.size() || eb[j].index < ea[i].index) {
            e = {eb[j].index, op(0.0, eb[j].value)};
            ++j;
        } else {
            e = {ea[i].index, op(ea[i].value, eb[j].value)};
            ++i;
            ++j;
        }
        if (e.value != 0.0) out.push_back(e);
    }
    return SparseSeq::from_sorted(std::move(out));
}

}  // namespace

SparseSeq operator+(const SparseSeq& a, const SparseSeq& b)
{
    return merge(a, b, [](double u, double v) { return u + v; });
}

SparseSeq operator-(const SparseSeq& a, const SparseSeq& b)
{
    return merge(a, b, [](double u, double v) { return u - v; });
}

double lp_norm(const SparseSeq& x, double p)
{
    if (std::isnan(p) || p < 1.0) throw InvalidArgument("lp_norm: p must be >= 1");
    if (p == kInf) {
        double m = 0.0;
        for (const auto& e : x.entries()) m = std::max(m, std::fabs(e.value));
        return m;
    }
    // Scale by the largest entry so large p cannot underflow the sum.
    double m = 0.0;
    for (const auto& e : x.entries()) m = std::max(m, std::fabs(e.value));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (const auto& e : x.entries()) s += std::pow(std::fabs(e.value) / m, p);
    return m * std::pow(s, 1.0 / p);
}

}  // namespace bmseq
