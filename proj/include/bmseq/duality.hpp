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
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "bmseq/block_space.hpp"

namespace bmseq {

/// sum_n x(n) y(n)
double pairing(const SparseSeq& x, const SparseSeq& y);

/// The three links of
///   |<x, y>| <= sum |l_I| ||x||_{p,I} ||a_I||_{p'}
///            <= sum |l_I| |I|^{1/q-1/p} ||x||_{p,I}
///            <= ||l||_{r'} ||x||_D
/// for y = rep.value().
struct HolderChainReport {
    double pairing = 0.0;
    double local_holder = 0.0;
    double block_scaled = 0.0;
    double coefficient_times_norm = 0.0;
    std::array<double, 3> slacks{};

    bool holds(double tol = 1e-10) const
    {
        return slacks[0] >= -tol && slacks[1] >= -tol && slacks[2] >= -tol;
    }
};

HolderChainReport holder_chain_check(const SparseSeq& x, const BlockRepresentation& rep, const Params& P);

enum class CertificateDirection { lower_bound_on_block_norm, lower_bound_on_bm_norm };

std::string_view to_string(CertificateDirection d) noexcept;

struct DualCertificate {
    SparseSeq test_vector;
    std::optional<BlockRepresentation> representation;
    double certified_value = 0.0;
    CertificateDirection direction = CertificateDirection::lower_bound_on_block_norm;
};

/// Tests x against y_K = sum z_I b_I over the intervals of level <= max_level
/// meeting supp(x), with z extremal for (s_I) = (|I|^{1/q-1/p} ||x||_{p,I})
/// and ||z||_{r'} = 1. The certified value <x, y_K> equals ||s||_r.
DualCertificate bm_norm_lower_certificate(const SparseSeq& x, const Params& P, int max_level);

/// max over candidates of |<x, y>| / ||x||_D (ties: lowest index).
DualCertificate block_norm_lower_certificate(const SparseSeq& y, const Params& P,
                                             const std::vector<SparseSeq>& candidates);

/// Shaped start sgn(y)|y|^{p'-1}, a second start shaped by r', and random
/// multiplicative perturbations of the first, each improved by projected
/// gradient ascent of <x,y>/||x||_D on supp(y).
std::vector<SparseSeq> default_block_candidates(const SparseSeq& y, const Params& P, int count = 64,
                                                std::uint64_t seed = 20260101, int ascent_steps = 200);

/// Gradient ascent of |<x,y>| / ||x||_D starting at x, over supp(x).
SparseSeq improve_candidate(const SparseSeq& x, const SparseSeq& y, const Params& P, int steps);

struct LrExtremal {
    std::vector<double> alpha;
    double value = 0.0;
};

/// For beta >= 0 and r > 1: alpha with ||alpha||_r = 1 and
/// sum alpha_k beta_k = ||beta||_{r'}. r = inf gives alpha = 1. beta = 0
/// gives alpha = 0.
LrExtremal lr_duality_extremal(const std::vector<double>& beta, double r);

/// r = 1 version: indicator of the first maximal entry, value max beta.
LrExtremal l1_duality_extremal(const std::vector<double>& beta);

}  // namespace bmseq
