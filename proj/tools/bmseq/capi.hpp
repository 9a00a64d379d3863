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

// Owning wrappers over the C handles, for the command-line tool.

#pragma once

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bmseq/bmseq.h"

namespace cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitBadInput = 1,
    kExitDivergent = 2,
    kExitToleranceUnmet = 3,
    kExitPrecondition = 4,
};

/// Terminates the command with an exit code; the message goes to stderr.
struct Exit : std::runtime_error {
    Exit(int code, const std::string& what) : std::runtime_error(what), code(code) {}
    int code;
};

inline void check(bm_status s)
{
    if (s == BM_OK) return;
    std::string msg = bm_last_error();
    switch (s) {
    case BM_ERR_PRECONDITION: {
        const double q = bm_last_error_quantity();
        if (!std::isnan(q)) {
            char buf[40];
            std::snprintf(buf, sizeof buf, " (violated quantity: %.10g)", q);
            msg += buf;
        }
        throw Exit(kExitPrecondition, msg);
    }
    case BM_ERR_TOLERANCE:
        throw Exit(kExitToleranceUnmet, msg);
    default:
        throw Exit(kExitBadInput, msg);
    }
}

struct SeqDeleter {
    void operator()(bm_seq* x) const { bm_seq_free(x); }
};
struct KernelDeleter {
    void operator()(bm_kernel* k) const { bm_kernel_free(k); }
};
struct RepDeleter {
    void operator()(bm_block_rep* r) const { bm_block_rep_free(r); }
};
struct StreamDeleter {
    void operator()(bm_dyadic_stream* s) const { bm_dyadic_stream_free(s); }
};
struct StringDeleter {
    void operator()(char* s) const { bm_string_free(s); }
};

using SeqPtr = std::unique_ptr<bm_seq, SeqDeleter>;
using KernelPtr = std::unique_ptr<bm_kernel, KernelDeleter>;
using RepPtr = std::unique_ptr<bm_block_rep, RepDeleter>;
using StreamPtr = std::unique_ptr<bm_dyadic_stream, StreamDeleter>;

/// Calls fn(&raw) and takes ownership of the produced handle.
template <class Ptr, class Fn>
Ptr make(Fn&& fn)
{
    typename Ptr::pointer raw = nullptr;
    check(fn(&raw));
    return Ptr(raw);
}

inline SeqPtr seq_from(const std::vector<int64_t>& idx, const std::vector<double>& val)
{
    return make<SeqPtr>([&](bm_seq** out) { return bm_seq_create(idx.data(), val.data(), idx.size(), out); });
}

inline SeqPtr unit(int64_t n)
{
    return make<SeqPtr>([&](bm_seq** out) { return bm_seq_unit(n, 1.0, out); });
}

inline std::string take_string(bm_status s, char* text)
{
    std::unique_ptr<char, StringDeleter> owned(text);
    check(s);
    return owned ? std::string(owned.get()) : std::string();
}

inline std::string seq_json(const bm_seq* x)
{
    char* s = nullptr;
    const bm_status st = bm_seq_to_json(x, &s);
    return take_string(st, s);
}

inline double lp(const bm_seq* x, double p)
{
    double v = 0.0;
    check(bm_lp_norm(x, p, &v));
    return v;
}

/// Dyadic-family norm value for any q.
inline double dyadic(const bm_seq* x, const bm_params& P)
{
    bm_norm_result r{};
    check(std::isinf(P.q) ? bm_q_infty_norm(x, &P, &r) : bm_dyadic_norm(x, &P, &r));
    return r.value;
}

}  // namespace cli
