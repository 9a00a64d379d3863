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

#include "bmseq/duality.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bmseq/error.hpp"
#include "bmseq/norms.hpp"

namespace bmseq {

std::string_view to_string(CertificateDirection d) noexcept
{
    return d == CertificateDirection::lower_bound_on_block_norm ? "lower_bound_on_block_norm"
                                                                : "lower_bound_on_bm_norm";
}

double pairing(const SparseSeq& x, const SparseSeq& y)
{
    auto a = x.entries();
    auto b = y.entries();
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].index < b[j].index) {
            ++i;
        } else if (b[j].index < a[i].index) {
            ++j;
        } else {
            s += a[i++].value * b[j++].value;
        }
    }
    return s;
}

HolderChainReport holder_chain_check(const SparseSeq& x, const BlockRepresentation& rep, const Params& P)
{
    HolderChainReport r;
    r.pairing = std::fabs(pairing(x, rep.value()));
    for (const auto& t : rep.terms()) {
        const auto& I = t.block.interval();
        const double local = local_lp(x, I, P.p());
        const double lam = std::fabs(t.coefficient);
        r.local_holder += lam * local * lp_norm(t.block.values(), P.p_conj());
        r.block_scaled += lam * block_bound(I, P) * local;
    }
    r.coefficient_times_norm = rep.coefficient_norm() * dyadic_family_norm(x, P);
    r.slacks = {r.local_holder - r.pairing, r.block_scaled - r.local_holder,
                r.coefficient_times_norm - r.block_scaled};
    return r;
}

LrExtremal lr_duality_extremal(const std::vector<double>& beta, double r)
{
    if (std::isnan(r) || !(r > 1.0)) throw InvalidArgument("lr_duality_extremal requires r > 1");
    for (double b : beta) {
        if (!(b >= 0.0) || !std::isfinite(b)) throw InvalidArgument("beta must be finite and nonnegative");
    }
    LrExtremal out;
    out.alpha.assign(beta.size(), 0.0);
    if (r == kInf) {
        std::fill(out.alpha.begin(), out.alpha.end(), 1.0);
        for (double b : beta) out.value += b;
        return out;
    }
    const double rc = conjugate(r);
    double s = 0.0;
    for (double b : beta) s += std::pow(b, rc);
    if (s == 0.0) return out;
    const double norm = std::pow(s, 1.0 / rc);
    for (std::size_t k = 0; k < beta.size(); ++k) {
        out.alpha[k] = std::pow(beta[k] / norm, rc - 1.0);
        out.value += out.alpha[k] * beta[k];
    }
    return out;
}

LrExtremal l1_duality_extremal(const std::vector<double>& beta)
{
    LrExtremal out;
    out.alpha.assign(beta.size(), 0.0);
    if (beta.empty()) return out;
    const auto it = std::max_element(beta.begin(), beta.end());
    out.alpha[static_cast<std::size_t>(it - beta.begin())] = 1.0;
    out.value = *it;
    return out;
}

DualCertificate bm_norm_lower_certificate(const SparseSeq& x, const Params& P, int max_level)
{
    if (x.empty()) throw InvalidArgument("bm_norm_lower_certificate: x must be nonzero");
    if (max_level < 0 || max_level > kMaxLevel) throw InvalidArgument("max_level out of range");

    std::vector<DyadicInterval> family;
    std::vector<double> s;
    for (int j = 0; j <= max_level; ++j) {
        for (const auto& I : intersecting_dyadic(x, j)) {
            family.push_back(I);
            s.push_back(block_bound(I, P) * local_lp(x, I, P.p()));
        }
    }
    const LrExtremal z = lr_duality_extremal(s, P.r_conj());

    BlockRepresentation rep(P);
    for (std::size_t i = 0; i < family.size(); ++i) {
        rep.add(z.alpha[i], extremal_block(x, family[i], P));
    }
    DualCertificate cert;
    cert.test_vector = rep.value();
    cert.certified_value = pairing(x, cert.test_vector);
    cert.representation = std::move(rep);
    cert.direction = CertificateDirection::lower_bound_on_bm_norm;
    return cert;
}

DualCertificate block_norm_lower_certificate(const SparseSeq& y, const Params& P,
                                             const std::vector<SparseSeq>& candidates)
{
    if (candidates.empty()) throw InvalidArgument("block_norm_lower_certificate: no candidates");
    DualCertificate cert;
    cert.direction = CertificateDirection::lower_bound_on_block_norm;
    double best = -1.0;
    for (const auto& x : candidates) {
        if (x.empty()) throw InvalidArgument("block_norm_lower_certificate: zero candidate");
        const double ratio = std::fabs(pairing(x, y)) / dyadic_family_norm(x, P);
        if (ratio > best) {
            best = ratio;
            cert.test_vector = x;
        }
    }
    cert.certified_value = best;
    return cert;
}

namespace {

SparseSeq with_values(std::span<const Entry> shape, const std::vector<double>& v)
{
    std::vector<Entry> e;
    e.reserve(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i) e.push_back({shape[i].index, v[i]});
    return SparseSeq::from_sorted(std::move(e));
}

SparseSeq power_shape(const SparseSeq& y, double exponent)
{
    std::vector<Entry> e;
    for (const auto& t : y.entries()) {
        const double mag = exponent == kInf ? 1.0 : std::pow(std::fabs(t.value), exponent);
        e.push_back({t.index, std::copysign(mag, t.value)});
    }
    return SparseSeq::from_sorted(std::move(e));
}

}  // namespace

SparseSeq improve_candidate(const SparseSeq& x0, const SparseSeq& y, const Params& P, int steps)
{
    if (x0.empty()) return x0;
    auto ratio = [&](const SparseSeq& x) {
        return x.empty() ? 0.0 : std::fabs(pairing(x, y)) / dyadic_family_norm(x, P);
    };
    // Work on the fixed support of x0 so coordinates stay aligned.
    auto shape = x0.entries();
    std::vector<double> v(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i) v[i] = shape[i].value;
    std::vector<double> yv(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i) yv[i] = y[shape[i].index];

    SparseSeq x = x0;
    double f = ratio(x);
    double step = 0.1;
    for (int it = 0; it < steps && step > 1e-14; ++it) {
        const double norm = dyadic_family_norm(x, P);
        const double pair = pairing(x, y);
        const double sign = pair < 0.0 ? -1.0 : 1.0;
        // Full gradient over the shape; zero coordinates get the y-part only.
        std::vector<double> g(shape.size(), 0.0);
        const auto grad_norm = dyadic_norm_gradient(x, P);
        std::size_t k = 0;
        for (std::size_t i = 0; i < shape.size(); ++i) {
            double dn = 0.0;
            if (k < x.size() && x.entries()[k].index == shape[i].index) dn = grad_norm[k++];
            g[i] = sign * (yv[i] / norm - pair * dn / (norm * norm));
        }
        double gmax = 0.0, vmax = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            gmax = std::max(gmax, std::fabs(g[i]));
            vmax = std::max(vmax, std::fabs(v[i]));
        }
        if (gmax == 0.0 || vmax == 0.0) break;
        bool moved = false;
        while (step > 1e-14) {
            std::vector<double> trial(v);
            for (std::size_t i = 0; i < v.size(); ++i) trial[i] += step * vmax * g[i] / gmax;
            SparseSeq xt = with_values(shape, trial);
            const double ft = ratio(xt);
            if (ft > f) {
                v = std::move(trial);
                x = std::move(xt);
                f = ft;
                step *= 1.5;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    return x;
}

std::vector<SparseSeq> default_block_candidates(const SparseSeq& y, const Params& P, int count,
                                                std::uint64_t seed, int ascent_steps)
{
    if (count <= 0) throw InvalidArgument("candidate count must be positive");
    if (y.empty()) return {SparseSeq::unit(0)};
    std::vector<SparseSeq> starts;
    const SparseSeq base = power_shape(y, P.p_conj() == kInf ? kInf : P.p_conj() - 1.0);
    starts.push_back(base);
    if (count > 1) starts.push_back(power_shape(y, P.r_conj() == kInf ? kInf : P.r_conj() - 1.0));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (static_cast<int>(starts.size()) < count) {
        const double spread = 0.05 + 0.75 * static_cast<double>(starts.size()) / count;
        std::vector<Entry> e;
        for (const auto& t : base.entries()) e.push_back({t.index, t.value * std::exp(spread * gauss(rng))});
        starts.push_back(SparseSeq::from_sorted(std::move(e)));
    }
    std::vector<SparseSeq> out;
    out.reserve(starts.size());
    for (const auto& s : starts) out.push_back(improve_candidate(s, y, P, ascent_steps));
    return out;
}

}  // namespace bmseq
